#include "qevo/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

#include "qevo/ga.hpp"
#include "qevo/qieo.hpp"

namespace qevo {

const char* algorithm_name(Algorithm a) noexcept {
  return a == Algorithm::Qieo ? "qieo" : "ga";
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "qieo") return Algorithm::Qieo;
  if (name == "ga") return Algorithm::Ga;
  throw std::invalid_argument("unknown algorithm: " + name);
}

const char* termination_name(TerminationReason r) noexcept {
  switch (r) {
    case TerminationReason::TargetReached:
      return "target_reached";
    case TerminationReason::MaxGenerations:
      return "max_generations";
    case TerminationReason::Stagnation:
      return "stagnation";
  }
  return "unknown";
}

void RunConfig::validate(Algorithm algorithm) const {
  const int min_population = algorithm == Algorithm::Ga ? 2 : 1;
  if (population_size < min_population) {
    throw std::invalid_argument("RunConfig: population_size must be >= " +
                                std::to_string(min_population));
  }
  if (max_generations < 1) {
    throw std::invalid_argument("RunConfig: max_generations must be >= 1");
  }
  if (stagnation_epsilon < 0.0) {
    throw std::invalid_argument("RunConfig: stagnation_epsilon must be >= 0");
  }
  if (stagnation_window < 1) {
    throw std::invalid_argument("RunConfig: stagnation_window must be >= 1");
  }
  if (algorithm == Algorithm::Qieo && delta_theta < 0.0) {
    throw std::invalid_argument("RunConfig: delta_theta must be >= 0");
  }
  if (algorithm == Algorithm::Ga) {
    if (ga.crossover_probability < 0.0 || ga.crossover_probability > 1.0) {
      throw std::invalid_argument(
          "RunConfig: crossover_probability outside [0, 1]");
    }
    if (ga.mutation_rate_per_bit > 1.0) {
      throw std::invalid_argument("RunConfig: mutation rate outside [0, 1]");
    }
  }
}

std::optional<TerminationReason> check_termination(const RunProgress& progress,
                                                   const RunConfig& config,
                                                   const ProblemSpec& spec) {
  const auto& history = progress.best_history;
  if (history.empty()) {
    return std::nullopt;
  }
  const double best = history.back();
  if (best <= spec.target_tolerance) {
    return TerminationReason::TargetReached;
  }
  if (progress.generation >= config.max_generations) {
    return TerminationReason::MaxGenerations;
  }
  if (progress.generation >= config.stagnation_window) {
    const double before =
        history[static_cast<std::size_t>(progress.generation -
                                         config.stagnation_window)];
    if (before - best < config.stagnation_epsilon) {
      return TerminationReason::Stagnation;
    }
  }
  return std::nullopt;
}

double quantile_linear(std::span<const double> sorted, double p) {
  if (sorted.empty()) {
    throw std::invalid_argument("quantile_linear: empty sample");
  }
  if (sorted.size() == 1) {
    return sorted.front();
  }
  const double rank = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double weight = rank - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * weight;
}

double metric_value(const TrialResult& result, Metric metric) noexcept {
  switch (metric) {
    case Metric::Fitness:
      return result.best_fitness;
    case Metric::Generations:
      return static_cast<double>(result.generations_run);
    case Metric::Evaluations:
      return static_cast<double>(result.evaluations);
  }
  return 0.0;
}

SummaryStats summarize(const std::vector<TrialResult>& results, Metric metric) {
  if (results.empty()) {
    throw std::invalid_argument("summarize: no trials");
  }
  std::vector<double> values;
  values.reserve(results.size());
  double mean = 0.0;
  double mean_generations = 0.0;
  double mean_evaluations = 0.0;
  double successes = 0.0;
  for (const auto& trial : results) {
    values.push_back(metric_value(trial, metric));
    mean += values.back();
    mean_generations += static_cast<double>(trial.generations_run);
    mean_evaluations += static_cast<double>(trial.evaluations);
    successes += trial.success ? 1.0 : 0.0;
  }
  const double count = static_cast<double>(results.size());
  mean /= count;

  double sum_sq = 0.0;
  for (const double v : values) {
    const double d = v - mean;
    sum_sq += d * d;
  }
  std::sort(values.begin(), values.end());

  SummaryStats stats;
  stats.minimum = values.front();
  stats.q1 = quantile_linear(values, 0.25);
  stats.median = quantile_linear(values, 0.5);
  stats.q3 = quantile_linear(values, 0.75);
  stats.maximum = values.back();
  stats.mean = mean;
  stats.stddev = results.size() > 1 ? std::sqrt(sum_sq / (count - 1.0)) : 0.0;
  stats.success_rate = successes / count;
  stats.mean_generations = mean_generations / count;
  stats.mean_evaluations = mean_evaluations / count;
  return stats;
}

int resolve_worker_count(int requested, int jobs) {
  int workers = requested;
  if (workers <= 0) {
    if (const char* env = std::getenv("QEVO_WORKERS")) {
      workers = std::atoi(env);
    }
  }
  if (workers <= 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
  }
  if (workers <= 0) {
    workers = 1;
  }
  return std::max(1, std::min(workers, jobs));
}

namespace {

TrialResult run_single(Algorithm algorithm, const ProblemSpec& spec,
                       const RunConfig& config, std::uint64_t seed) {
  return algorithm == Algorithm::Qieo ? run_qieo(spec, config, seed)
                                      : run_ga(spec, config, seed);
}

void parallel_for_index(int jobs, int workers,
                        const std::function<void(int)>& body) {
  if (workers <= 1 || jobs <= 1) {
    for (int k = 0; k < jobs; ++k) {
      body(k);
    }
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      while (true) {
        const int k = next.fetch_add(1);
        if (k >= jobs) {
          return;
        }
        body(k);
      }
    });
  }
  for (auto& thread : threads) {
    thread.join();
  }
}

}  // namespace

std::vector<TrialResult> run_trials(Algorithm algorithm, const ProblemSpec& spec,
                                    const RunConfig& config, int n_trials,
                                    std::uint64_t base_seed, int workers) {
  if (n_trials < 1) {
    throw std::invalid_argument("run_trials: n_trials must be >= 1");
  }
  spec.validate();
  config.validate(algorithm);

  std::vector<TrialResult> results(static_cast<std::size_t>(n_trials));
  const int pool = resolve_worker_count(workers, n_trials);
  parallel_for_index(n_trials, pool, [&](int k) {
    const std::uint64_t seed = derive_seed(base_seed, stream_tag(StreamKind::Trial),
                                           static_cast<std::uint64_t>(k));
    auto& slot = results[static_cast<std::size_t>(k)];
    try {
      slot = run_single(algorithm, spec, config, seed);
    } catch (const std::exception& failure) {
      slot = TrialResult{};
      slot.seed = seed;
      slot.best_fitness = std::numeric_limits<double>::quiet_NaN();
      slot.error = failure.what();
    }
  });
  return results;
}

std::vector<BatchResult> sweep_population_sizes(
    Algorithm algorithm, const ProblemSpec& spec, std::span<const int> sizes,
    const RunConfig& config, int n_trials, std::uint64_t base_seed, int workers) {
  if (sizes.empty()) {
    throw std::invalid_argument("sweep_population_sizes: no sizes");
  }
  std::vector<BatchResult> batches;
  batches.reserve(sizes.size());
  for (const int size : sizes) {
    BatchResult batch;
    batch.algorithm = algorithm;
    batch.spec = spec;
    batch.config = config;
    batch.config.population_size = size;
    batch.batch_seed = derive_seed(base_seed, stream_tag(StreamKind::PopulationSweep),
                                   static_cast<std::uint64_t>(size));
    batch.trials = run_trials(algorithm, batch.spec, batch.config, n_trials,
                              batch.batch_seed, workers);
    batches.push_back(std::move(batch));
  }
  return batches;
}

std::vector<BatchResult> sweep_dimensions(
    Algorithm algorithm, std::span<const int> dimensions, int fixed_population,
    const RunConfig& config, int n_trials, std::uint64_t base_seed,
    const std::function<ProblemSpec(int)>& problem_for_dimension, int workers) {
  if (dimensions.empty()) {
    throw std::invalid_argument("sweep_dimensions: no dimensions");
  }
  std::vector<BatchResult> batches;
  batches.reserve(dimensions.size());
  for (const int dim : dimensions) {
    BatchResult batch;
    batch.algorithm = algorithm;
    batch.spec = problem_for_dimension(dim);
    batch.config = config;
    batch.config.population_size = fixed_population;
    batch.batch_seed = derive_seed(base_seed, stream_tag(StreamKind::DimensionSweep),
                                   static_cast<std::uint64_t>(dim));
    batch.trials = run_trials(algorithm, batch.spec, batch.config, n_trials,
                              batch.batch_seed, workers);
    batches.push_back(std::move(batch));
  }
  return batches;
}

std::vector<BatchResult> sweep_dimensions(Algorithm algorithm,
                                          FunctionId function,
                                          std::span<const int> dimensions,
                                          int fixed_population,
                                          const RunConfig& config, int n_trials,
                                          std::uint64_t base_seed,
                                          int bits_per_variable, int workers) {
  return sweep_dimensions(
      algorithm, dimensions, fixed_population, config, n_trials, base_seed,
      [function, bits_per_variable](int dim) {
        return make_problem(function, dim, bits_per_variable);
      },
      workers);
}

std::vector<SummaryRow> summary_table(std::span<const BatchResult> batches,
                                      bool key_is_dimension) {
  std::vector<SummaryRow> rows;
  rows.reserve(batches.size());
  for (const auto& batch : batches) {
    SummaryRow row;
    row.key = key_is_dimension ? batch.spec.dimension
                               : batch.config.population_size;
    row.fitness = summarize(batch.trials, Metric::Fitness);
    row.generations = summarize(batch.trials, Metric::Generations);
    row.evaluations = summarize(batch.trials, Metric::Evaluations);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qevo
