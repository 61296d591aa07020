#include "qevo/report.hpp"

#include <array>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "qevo/validate.hpp"

namespace qevo {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string format_double(double value) {
  std::array<char, 40> buffer{};
  const auto [ptr, ec] =
      std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return std::string(buffer.data(), ptr);
}

std::string batch_id(const BatchResult& batch) {
  std::ostringstream id;
  id << algorithm_name(batch.algorithm) << '_'
     << function_name(batch.spec.function) << "_d" << batch.spec.dimension
     << "_p" << batch.config.population_size;
  return id.str();
}

namespace {

const char* trial_termination(const TrialResult& trial) {
  return trial.error.empty() ? termination_name(trial.termination) : "error";
}

}  // namespace

void write_trials_csv(std::ostream& out, std::span<const BatchResult> batches) {
  out << "algorithm,function,dim,pop,seed,generations,evaluations,"
         "best_fitness,success,termination_reason,elapsed_ns\n";
  for (const auto& batch : batches) {
    for (const auto& trial : batch.trials) {
      out << algorithm_name(batch.algorithm) << ','
          << function_name(batch.spec.function) << ',' << batch.spec.dimension
          << ',' << batch.config.population_size << ',' << trial.seed << ','
          << trial.generations_run << ',' << trial.evaluations << ','
          << format_double(trial.best_fitness) << ','
          << (trial.success ? "true" : "false") << ',' << trial_termination(trial)
          << ',' << trial.elapsed_ns << '\n';
    }
  }
}

void write_curve_csv(std::ostream& out, const TrialResult& trial) {
  out << "generation,best_fitness,elapsed_ns\n";
  for (const auto& point : trial.curve) {
    out << point.generation << ',' << format_double(point.best_fitness) << ','
        << point.elapsed_ns << '\n';
  }
}

namespace {

ordered_json stats_to_json(const SummaryStats& stats) {
  ordered_json j;
  j["min"] = stats.minimum;
  j["q1"] = stats.q1;
  j["median"] = stats.median;
  j["q3"] = stats.q3;
  j["max"] = stats.maximum;
  j["mean"] = stats.mean;
  j["stddev"] = stats.stddev;
  return j;
}

ordered_json batch_to_json(const BatchResult& batch) {
  const auto& spec = batch.spec;
  const auto& config = batch.config;
  ordered_json j;
  j["id"] = batch_id(batch);
  j["algorithm"] = algorithm_name(batch.algorithm);
  j["function"] = function_name(spec.function);
  j["dimension"] = spec.dimension;
  j["population"] = config.population_size;
  j["trials"] = batch.trials.size();

  ordered_json cfg;
  cfg["bits_per_variable"] = spec.layout.bits_per_variable;
  cfg["lower_bounds"] = spec.layout.lower_bounds;
  cfg["upper_bounds"] = spec.layout.upper_bounds;
  cfg["target_tolerance"] = spec.target_tolerance;
  if (spec.function == FunctionId::Rastrigin) {
    cfg["rastrigin_amplitude"] = spec.rastrigin_amplitude;
    cfg["rastrigin_frequency"] = spec.rastrigin_frequency;
  }
  cfg["max_generations"] = config.max_generations;
  cfg["stagnation_epsilon"] = config.stagnation_epsilon;
  cfg["stagnation_window"] = config.stagnation_window;
  if (batch.algorithm == Algorithm::Qieo) {
    cfg["delta_theta"] = config.delta_theta;
  } else {
    cfg["crossover_probability"] = config.ga.crossover_probability;
    cfg["mutation_rate_per_bit"] =
        config.ga.resolved_mutation_rate(spec.layout.total_bits());
  }
  cfg["record_curve"] = config.record_curve;
  cfg["batch_seed"] = batch.batch_seed;
  j["config"] = cfg;

  const SummaryStats generations = summarize(batch.trials, Metric::Generations);
  j["success_rate"] = generations.success_rate;
  j["mean_generations"] = generations.mean_generations;
  j["mean_evaluations"] = generations.mean_evaluations;
  // Headline accounting used by the comparison tables: population times mean
  // generations, which excludes the initial-population evaluations.
  j["evaluations_population_x_mean_generations"] =
      static_cast<double>(config.population_size) * generations.mean_generations;

  ordered_json metrics;
  metrics["fitness"] = stats_to_json(summarize(batch.trials, Metric::Fitness));
  metrics["generations"] = stats_to_json(generations);
  metrics["evaluations"] =
      stats_to_json(summarize(batch.trials, Metric::Evaluations));
  j["metrics"] = metrics;

  int failed = 0;
  for (const auto& trial : batch.trials) {
    if (!trial.error.empty()) {
      ++failed;
    }
  }
  if (failed > 0) {
    j["failed_trials"] = failed;
  }
  return j;
}

void write_or_throw(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
}

}  // namespace

std::string summary_to_json(std::span<const BatchResult> batches) {
  ordered_json j = ordered_json::array();
  for (const auto& batch : batches) {
    j.push_back(batch_to_json(batch));
  }
  return j.dump(2);
}

void emit_results(const std::vector<BatchResult>& batches,
                  const ExperimentManifest& manifest) {
  if (batches.empty()) {
    throw std::invalid_argument("emit_results: no batches");
  }
  const fs::path dir(manifest.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory " + dir.string() +
                             ": " + ec.message());
  }

  const bool want_csv =
      std::find(manifest.formats.begin(), manifest.formats.end(), "csv") !=
      manifest.formats.end();
  const bool want_json =
      std::find(manifest.formats.begin(), manifest.formats.end(), "json") !=
      manifest.formats.end();

  if (want_csv) {
    std::ostringstream trials;
    write_trials_csv(trials, batches);
    write_or_throw(dir / "trials.csv", trials.str());

    for (const auto& batch : batches) {
      for (std::size_t k = 0; k < batch.trials.size(); ++k) {
        const auto& trial = batch.trials[k];
        if (trial.curve.empty()) {
          continue;
        }
        std::ostringstream curve;
        write_curve_csv(curve, trial);
        write_or_throw(dir / ("curve_" + batch_id(batch) + "_t" +
                              std::to_string(k) + ".csv"),
                       curve.str());
      }
    }
  }
  if (want_json) {
    write_or_throw(dir / "summary.json", summary_to_json(batches));
  }
  // The manifest echo makes every run reproducible from its output directory.
  write_or_throw(dir / "manifest.json", manifest_to_json(manifest));
}

ReferenceConfig reference_config(FunctionId function) noexcept {
  switch (function) {
    case FunctionId::Ackley:
      return {100, 2000, kDefaultDeltaTheta};
    case FunctionId::Rosenbrock:
      return {200, 1000, 0.007 * std::numbers::pi};
    case FunctionId::Rastrigin:
      return {100, 200, 0.015 * std::numbers::pi};
  }
  return {};
}

int reference_population(Algorithm algorithm, FunctionId function) noexcept {
  const ReferenceConfig ref = reference_config(function);
  return algorithm == Algorithm::Ga ? ref.ga_population : ref.qieo_population;
}

std::vector<ComparisonRow> compare_report(std::span<const BatchResult> qieo,
                                          std::span<const BatchResult> ga) {
  if (qieo.size() != ga.size() || qieo.empty()) {
    throw std::invalid_argument(
        "compare_report: batch lists must pair up one-to-one");
  }
  std::vector<ComparisonRow> rows;
  rows.reserve(qieo.size());
  for (std::size_t i = 0; i < qieo.size(); ++i) {
    const auto& q = qieo[i];
    const auto& g = ga[i];
    if (q.spec.function != g.spec.function ||
        q.spec.dimension != g.spec.dimension ||
        q.spec.target_tolerance != g.spec.target_tolerance ||
        q.spec.layout.bits_per_variable != g.spec.layout.bits_per_variable ||
        q.spec.layout.lower_bounds != g.spec.layout.lower_bounds ||
        q.spec.layout.upper_bounds != g.spec.layout.upper_bounds) {
      throw std::invalid_argument(
          "compare_report: batches target different problems");
    }

    const SummaryStats qs = summarize(q.trials, Metric::Generations);
    const SummaryStats gs = summarize(g.trials, Metric::Generations);
    const SummaryStats qe = summarize(q.trials, Metric::Evaluations);
    const SummaryStats ge = summarize(g.trials, Metric::Evaluations);

    double q_elapsed = 0.0;
    for (const auto& trial : q.trials) {
      q_elapsed += static_cast<double>(trial.elapsed_ns);
    }
    q_elapsed /= static_cast<double>(q.trials.size());
    double g_elapsed = 0.0;
    for (const auto& trial : g.trials) {
      g_elapsed += static_cast<double>(trial.elapsed_ns);
    }
    g_elapsed /= static_cast<double>(g.trials.size());

    ComparisonRow row;
    row.function = q.spec.function;
    row.dimension = q.spec.dimension;
    row.ga_population = g.config.population_size;
    row.qieo_population = q.config.population_size;
    row.ga_success_rate = gs.success_rate;
    row.qieo_success_rate = qs.success_rate;
    row.ga_mean_generations = gs.mean_generations;
    row.qieo_mean_generations = qs.mean_generations;
    row.ga_evaluations =
        static_cast<double>(g.config.population_size) * gs.mean_generations;
    row.qieo_evaluations =
        static_cast<double>(q.config.population_size) * qs.mean_generations;
    row.ga_raw_evaluations = ge.mean_evaluations;
    row.qieo_raw_evaluations = qe.mean_evaluations;
    row.ga_mean_elapsed_ns = g_elapsed;
    row.qieo_mean_elapsed_ns = q_elapsed;
    row.evaluation_ratio =
        row.qieo_evaluations > 0.0 ? row.ga_evaluations / row.qieo_evaluations
                                   : 0.0;
    row.wall_clock_ratio =
        q_elapsed > 0.0 ? g_elapsed / q_elapsed : 0.0;
    rows.push_back(row);
  }
  return rows;
}

void write_comparison_csv(std::ostream& out,
                          std::span<const ComparisonRow> rows) {
  out << "function,dimension,ga_population,ga_success_rate,"
         "ga_mean_generations,ga_evaluations,ga_raw_evaluations,"
         "qieo_population,qieo_success_rate,qieo_mean_generations,"
         "qieo_evaluations,qieo_raw_evaluations,evaluation_ratio,"
         "ga_mean_elapsed_ns,qieo_mean_elapsed_ns,wall_clock_ratio\n";
  for (const auto& row : rows) {
    out << function_name(row.function) << ',' << row.dimension << ','
        << row.ga_population << ',' << format_double(row.ga_success_rate) << ','
        << format_double(row.ga_mean_generations) << ','
        << format_double(row.ga_evaluations) << ','
        << format_double(row.ga_raw_evaluations) << ',' << row.qieo_population
        << ',' << format_double(row.qieo_success_rate) << ','
        << format_double(row.qieo_mean_generations) << ','
        << format_double(row.qieo_evaluations) << ','
        << format_double(row.qieo_raw_evaluations) << ','
        << format_double(row.evaluation_ratio) << ','
        << format_double(row.ga_mean_elapsed_ns) << ','
        << format_double(row.qieo_mean_elapsed_ns) << ','
        << format_double(row.wall_clock_ratio) << '\n';
  }
}

void print_comparison(std::ostream& out, std::span<const ComparisonRow> rows) {
  out << "function     dim | pop     gens     evals (GA) | pop   gens    evals "
         "(QIEO) | eval ratio  wall-clock ratio\n";
  for (const auto& row : rows) {
    out << std::left << std::setw(12) << function_name(row.function)
        << std::right << std::setw(4) << row.dimension << " | " << std::setw(5)
        << row.ga_population << ' ' << std::setw(8) << std::fixed
        << std::setprecision(1) << row.ga_mean_generations << ' '
        << std::setw(10) << std::setprecision(0) << row.ga_evaluations
        << "      | " << std::setw(5) << row.qieo_population << ' '
        << std::setw(6) << std::setprecision(1) << row.qieo_mean_generations
        << ' ' << std::setw(8) << std::setprecision(0) << row.qieo_evaluations
        << "        | " << std::setw(10) << std::setprecision(2)
        << row.evaluation_ratio << "  " << std::setw(12)
        << row.wall_clock_ratio << " (informational)\n";
    out.unsetf(std::ios::floatfield);
    out << std::setprecision(6);
  }
}

namespace {

std::uint64_t algorithm_word(Algorithm a) {
  return a == Algorithm::Qieo ? 1u : 2u;
}

std::uint64_t function_word(FunctionId f) {
  return static_cast<std::uint64_t>(f) + 1u;
}

void log_batch(std::ostream& log, const BatchResult& batch) {
  const SummaryStats stats = summarize(batch.trials, Metric::Generations);
  log << std::left << std::setw(5) << algorithm_name(batch.algorithm)
      << ' ' << std::left << std::setw(10) << function_name(batch.spec.function)
      << " dim=" << std::setw(4) << batch.spec.dimension
      << " pop=" << std::setw(6) << batch.config.population_size
      << " trials=" << batch.trials.size()
      << " success=" << std::fixed << std::setprecision(3) << stats.success_rate
      << " mean_gens=" << std::setprecision(1) << stats.mean_generations
      << " mean_evals=" << std::setprecision(0) << stats.mean_evaluations
      << '\n';
  log.unsetf(std::ios::floatfield);
  log << std::setprecision(6);
  log.flush();
}

int run_validate_command(std::ostream& log) {
  const auto checks = run_validation_suite();
  bool all_passed = true;
  for (const auto& check : checks) {
    log << (check.passed ? "[PASS] " : "[FAIL] ") << check.name;
    if (!check.detail.empty()) {
      log << " (" << check.detail << ')';
    }
    log << '\n';
    all_passed = all_passed && check.passed;
  }
  log << (all_passed ? "all checks passed\n" : "some checks FAILED\n");
  return all_passed ? 0 : 1;
}

}  // namespace

int execute(const ExperimentManifest& manifest, std::ostream& log) {
  if (manifest.command == "validate") {
    return run_validate_command(log);
  }

  std::vector<BatchResult> batches;

  if (manifest.command == "run") {
    for (const Algorithm algorithm : manifest.algorithms) {
      for (const FunctionId function : manifest.functions) {
        const int dim = resolved_dimension(manifest, function);
        const ProblemSpec spec = build_problem(manifest, function, dim);
        for (const int population : manifest.populations) {
          BatchResult batch;
          batch.algorithm = algorithm;
          batch.spec = spec;
          batch.config = build_run_config(manifest, population);
          batch.batch_seed = derive_seed(
              manifest.base_seed, stream_tag(StreamKind::Batch),
              algorithm_word(algorithm), function_word(function),
              static_cast<std::uint64_t>(dim),
              static_cast<std::uint64_t>(population));
          batch.trials = run_trials(algorithm, batch.spec, batch.config,
                                    manifest.trials, batch.batch_seed,
                                    manifest.workers);
          log_batch(log, batch);
          batches.push_back(std::move(batch));
        }
      }
    }
  } else if (manifest.command == "sweep-pop") {
    for (const Algorithm algorithm : manifest.algorithms) {
      for (const FunctionId function : manifest.functions) {
        const int dim = resolved_dimension(manifest, function);
        const ProblemSpec spec = build_problem(manifest, function, dim);
        const RunConfig config =
            build_run_config(manifest, manifest.populations.front());
        auto swept = sweep_population_sizes(
            algorithm, spec, manifest.populations, config, manifest.trials,
            derive_seed(manifest.base_seed, stream_tag(StreamKind::Batch),
                        algorithm_word(algorithm), function_word(function),
                        static_cast<std::uint64_t>(dim)),
            manifest.workers);
        for (auto& batch : swept) {
          log_batch(log, batch);
          batches.push_back(std::move(batch));
        }
      }
    }
  } else if (manifest.command == "sweep-dim") {
    for (const Algorithm algorithm : manifest.algorithms) {
      for (const FunctionId function : manifest.functions) {
        const RunConfig config =
            build_run_config(manifest, manifest.sweep_population);
        auto swept = sweep_dimensions(
            algorithm, manifest.dimensions, manifest.sweep_population, config,
            manifest.trials,
            derive_seed(manifest.base_seed, stream_tag(StreamKind::Batch),
                        algorithm_word(algorithm), function_word(function)),
            [&manifest, function](int dim) {
              return build_problem(manifest, function, dim);
            },
            manifest.workers);
        for (auto& batch : swept) {
          log_batch(log, batch);
          batches.push_back(std::move(batch));
        }
      }
    }
  } else if (manifest.command == "compare") {
    std::vector<BatchResult> qieo_batches;
    std::vector<BatchResult> ga_batches;
    for (const FunctionId function : manifest.functions) {
      const int dim = resolved_dimension(manifest, function);
      const ProblemSpec spec = build_problem(manifest, function, dim);
      const ReferenceConfig ref = reference_config(function);
      for (const Algorithm algorithm : {Algorithm::Qieo, Algorithm::Ga}) {
        BatchResult batch;
        batch.algorithm = algorithm;
        batch.spec = spec;
        batch.config = build_run_config(
            manifest, reference_population(algorithm, function));
        if (!manifest.delta_theta) {
          batch.config.delta_theta = ref.qieo_delta_theta;
        }
        if (!manifest.crossover_probability) {
          batch.config.ga.crossover_probability = kReferenceCrossoverProbability;
        }
        if (!manifest.mutation_rate) {
          batch.config.ga.mutation_rate_per_bit = kReferenceMutationRate;
        }
        batch.batch_seed = derive_seed(
            manifest.base_seed, stream_tag(StreamKind::Batch),
            algorithm_word(algorithm), function_word(function),
            static_cast<std::uint64_t>(dim),
            static_cast<std::uint64_t>(batch.config.population_size));
        batch.trials = run_trials(algorithm, batch.spec, batch.config,
                                  manifest.trials, batch.batch_seed,
                                  manifest.workers);
        log_batch(log, batch);
        (algorithm == Algorithm::Qieo ? qieo_batches : ga_batches)
            .push_back(std::move(batch));
      }
    }
    const auto rows = compare_report(qieo_batches, ga_batches);
    print_comparison(log, rows);

    for (auto& batch : qieo_batches) batches.push_back(std::move(batch));
    for (auto& batch : ga_batches) batches.push_back(std::move(batch));
    emit_results(batches, manifest);

    std::ostringstream comparison;
    write_comparison_csv(comparison, rows);
    std::ofstream out(fs::path(manifest.output_dir) / "comparison.csv",
                      std::ios::binary);
    out << comparison.str();
    if (!out) {
      throw std::runtime_error("cannot write comparison.csv");
    }
    log << "results written to " << manifest.output_dir << '\n';
    return 0;
  } else {
    throw std::invalid_argument("unknown command: " + manifest.command);
  }

  emit_results(batches, manifest);
  log << "results written to " << manifest.output_dir << '\n';
  return 0;
}

}  // namespace qevo
