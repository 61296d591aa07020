// Acceptance suite: runs every benchmark acceptance criterion at its stated
// tolerance and prints one PASS/FAIL line per criterion. Exit code is zero
// only when every criterion holds.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qevo/ga.hpp"
#include "qevo/manifest.hpp"
#include "qevo/qieo.hpp"
#include "qevo/report.hpp"

using namespace qevo;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSuiteSeed = 1;

struct CriterionResult {
  int number = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

class Check {
 public:
  void require(bool condition, const std::string& label) {
    if (!condition) {
      passed_ = false;
      failures_ += failures_.empty() ? label : "; " + label;
    }
  }
  void note(const std::string& text) {
    notes_ += notes_.empty() ? text : "; " + text;
  }
  bool passed() const { return passed_; }
  std::string detail() const {
    if (passed_) return notes_;
    return notes_.empty() ? failures_ : failures_ + " | " + notes_;
  }

 private:
  bool passed_ = true;
  std::string failures_;
  std::string notes_;
};

std::string fmt(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.4g", v);
  return buffer;
}

double median_evaluations(const std::vector<TrialResult>& trials) {
  return summarize(trials, Metric::Evaluations).median;
}

double iqr_evaluations(const std::vector<TrialResult>& trials) {
  const SummaryStats stats = summarize(trials, Metric::Evaluations);
  return stats.q3 - stats.q1;
}

// ---------------------------------------------------------------------------
// 1. Function correctness: exact minima and hand-evaluated points.

CriterionResult criterion_1() {
  Check check;
  const std::vector<double> zeros10(10, 0.0);
  const std::vector<double> ones4(4, 1.0);
  const std::vector<double> zeros2(2, 0.0);
  check.require(std::abs(ackley(zeros10)) <= 1e-12, "ackley(0)=0");
  check.require(std::abs(rosenbrock(ones4)) <= 1e-12, "rosenbrock(1)=0");
  check.require(std::abs(rastrigin(zeros2)) <= 1e-12, "rastrigin(0)=0");

  check.require(std::abs(ackley(std::vector<double>{1.0, 1.0}) -
                         3.6253849384403628) <= 1e-9,
                "ackley(1,1)");
  check.require(std::abs(rosenbrock(std::vector<double>{0.0, 0.0}) - 1.0) <=
                    1e-9,
                "rosenbrock(0,0)=1");
  check.require(std::abs(rosenbrock(std::vector<double>{-1.0, 1.0}) - 4.0) <=
                    1e-9,
                "rosenbrock(-1,1)=4");
  check.require(std::abs(rastrigin(std::vector<double>{1.0, 1.0}) - 2.0) <=
                    1e-9,
                "rastrigin(1,1)=2");
  check.require(std::abs(rastrigin(std::vector<double>{0.5}) - 20.25) <= 1e-9,
                "rastrigin(0.5)=20.25");
  return {1, "function correctness", check.passed(), check.detail(), 0.0};
}

// ---------------------------------------------------------------------------
// 2. Quantum invariants: normalization under random rotations, the rotation
//    lookup table, and balanced measurement of the fresh population.

CriterionResult criterion_2() {
  Check check;

  RandomStream rng(derive_seed(kSuiteSeed, 2));
  QuantumPopulation population = init_quantum_population(4, 16);
  ThetaMatrix thetas(4, 16, kDefaultDeltaTheta);
  for (int step = 0; step < 10000; ++step) {
    for (int j = 0; j < 4; ++j) {
      for (int i = 0; i < 16; ++i) {
        thetas.row_data(j)[i] = static_cast<std::int8_t>(rng.next_below(3)) - 1;
      }
    }
    rotate_in_place(population, thetas);
  }
  double worst = 0.0;
  for (const auto& individual : population.individuals) {
    for (std::size_t i = 0; i < individual.alphas.size(); ++i) {
      const double norm = individual.alphas[i] * individual.alphas[i] +
                          individual.betas[i] * individual.betas[i];
      worst = std::max(worst, std::abs(norm - 1.0));
    }
  }
  check.require(worst < 1e-9, "normalization drift " + fmt(worst));
  check.note("max |a^2+b^2-1| = " + fmt(worst) + " after 1e4 rotations");

  BitString best(2);
  best.bits = {0, 1};
  std::vector<BitString> measured(2, BitString(2));
  measured[0].bits = {0, 0};
  measured[1].bits = {1, 1};
  const ThetaMatrix table = compute_thetas(measured, best, 0.125);
  check.require(table.theta(0, 0) == 0.0, "lookup (0,0)");
  check.require(table.theta(0, 1) == 0.125, "lookup (0,1)");
  check.require(table.theta(1, 0) == -0.125, "lookup (1,0)");
  check.require(table.theta(1, 1) == 0.0, "lookup (1,1)");

  const QuantumPopulation fresh = init_quantum_population(20, 50);
  RandomStream measure_rng(derive_seed(kSuiteSeed, 22));
  std::uint64_t ones = 0;
  std::uint64_t total = 0;
  for (int round = 0; round < 100; ++round) {
    for (const auto& bits : measure(fresh, measure_rng)) {
      for (const auto bit : bits.bits) ones += bit;
      total += bits.size();
    }
  }
  const double fraction = static_cast<double>(ones) / static_cast<double>(total);
  const double sigma = 0.5 / std::sqrt(static_cast<double>(total));
  check.require(std::abs(fraction - 0.5) <= 4.0 * sigma,
                "ones fraction " + fmt(fraction) + " outside 4 sigma");
  check.note("ones fraction " + fmt(fraction) + " over " + std::to_string(total) +
             " bits (4 sigma = " + fmt(4.0 * sigma) + ")");
  return {2, "quantum invariants", check.passed(), check.detail(), 0.0};
}

// ---------------------------------------------------------------------------
// 3. Degenerate-parameter oracles: zero rotation step keeps the measured-bit
//    stream uniform; a GA without variation keeps a constant best.

CriterionResult criterion_3() {
  Check check;

  const ProblemSpec spec = make_problem(FunctionId::Rastrigin, 2);
  const int n = 25;
  const int m = spec.layout.total_bits();
  QuantumPopulation population = init_quantum_population(n, m);
  std::vector<BitString> measured(static_cast<std::size_t>(n),
                                  BitString(static_cast<std::size_t>(m)));
  ThetaMatrix thetas(n, m, 0.0);
  EvalCounter evals;
  std::vector<double> scratch(2);
  BitString best_bits;
  double best = std::numeric_limits<double>::infinity();
  std::uint64_t ones = 0;
  std::uint64_t total = 0;
  const std::uint64_t seed = derive_seed(kSuiteSeed, 3);
  const int generations = 1 + 100000 / (n * m);
  for (int generation = 0; generation < generations; ++generation) {
    for (int j = 0; j < n; ++j) {
      RandomStream rng(derive_seed(seed, stream_tag(StreamKind::Measurement),
                                   static_cast<std::uint64_t>(generation),
                                   static_cast<std::uint64_t>(j)));
      auto& bits = measured[static_cast<std::size_t>(j)];
      measure_individual_into(population.individuals[static_cast<std::size_t>(j)],
                              rng, bits);
      for (const auto bit : bits.bits) ones += bit;
      total += static_cast<std::uint64_t>(m);
      const double f = evaluate(spec, bits, evals, scratch);
      if (f < best) {
        best = f;
        best_bits = bits;
      }
    }
    compute_thetas_into(measured, best_bits, thetas);
    rotate_in_place(population, thetas);
  }
  const double expected = static_cast<double>(total) / 2.0;
  const double d_zero = (static_cast<double>(total - ones)) - expected;
  const double d_one = static_cast<double>(ones) - expected;
  const double chi_square = (d_zero * d_zero + d_one * d_one) / expected;
  const double p_value = std::erfc(std::sqrt(chi_square / 2.0));
  check.require(p_value > 0.001, "chi-square p = " + fmt(p_value));
  check.note("zero-step stream: chi2 = " + fmt(chi_square) + ", p = " +
             fmt(p_value) + " over " + std::to_string(total) + " bits");

  RunConfig frozen;
  frozen.population_size = 30;
  frozen.max_generations = 80;
  frozen.stagnation_epsilon = 0.0;
  frozen.ga.crossover_probability = 0.0;
  frozen.ga.mutation_rate_per_bit = 0.0;
  frozen.record_curve = true;
  const TrialResult still = run_ga(spec, frozen, derive_seed(kSuiteSeed, 33));
  bool constant = !still.curve.empty();
  for (const auto& point : still.curve) {
    constant = constant && point.best_fitness == still.curve.front().best_fitness;
  }
  check.require(constant, "GA without variation changed its best");
  check.note("GA best constant over " + std::to_string(still.curve.size()) +
             " generations");
  return {3, "degenerate-parameter oracles", check.passed(), check.detail(), 0.0};
}

// ---------------------------------------------------------------------------
// 4. Monotone curves; bit-identical trials.csv bodies at worker counts 1 and 8
//    (modulo the wall-clock timing column, which is hardware noise).

std::string strip_timing_column(const std::string& csv) {
  std::stringstream out;
  std::stringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    out << line.substr(0, line.rfind(',')) << '\n';
  }
  return out.str();
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

CriterionResult criterion_4() {
  Check check;

  RunConfig config;
  config.population_size = 50;
  config.max_generations = 400;
  config.record_curve = true;

  for (const int workers : {1, 8}) {
    std::vector<BatchResult> batches;
    for (const FunctionId function :
         {FunctionId::Ackley, FunctionId::Rosenbrock, FunctionId::Rastrigin}) {
      const ProblemSpec spec = make_problem(function, default_dimension(function));
      for (const Algorithm algorithm : {Algorithm::Qieo, Algorithm::Ga}) {
        BatchResult batch;
        batch.algorithm = algorithm;
        batch.spec = spec;
        batch.config = config;
        batch.batch_seed = derive_seed(kSuiteSeed, 4, stream_tag(StreamKind::Batch),
                                       static_cast<std::uint64_t>(function));
        batch.trials = run_trials(algorithm, spec, batch.config, 10,
                                  batch.batch_seed, workers);
        batches.push_back(std::move(batch));
      }
    }
    std::size_t curve_points = 0;
    for (const auto& batch : batches) {
      for (const auto& trial : batch.trials) {
        for (std::size_t i = 1; i < trial.curve.size(); ++i) {
          check.require(
              trial.curve[i].best_fitness <= trial.curve[i - 1].best_fitness,
              "curve increased in " + batch_id(batch));
        }
        curve_points += trial.curve.size();
      }
    }
    if (workers == 1) {
      check.note(std::to_string(curve_points) + " curve points checked");
    }

    ExperimentManifest manifest;
    manifest.record_curve = true;
    manifest.workers = workers;
    manifest.output_dir =
        (fs::temp_directory_path() / ("qevo_acceptance_w" + std::to_string(workers)))
            .string();
    fs::remove_all(manifest.output_dir);
    emit_results(batches, manifest);
  }

  const std::string w1 = read_file(fs::temp_directory_path() /
                                   "qevo_acceptance_w1" / "trials.csv");
  const std::string w8 = read_file(fs::temp_directory_path() /
                                   "qevo_acceptance_w8" / "trials.csv");
  check.require(!w1.empty(), "trials.csv missing");
  check.require(strip_timing_column(w1) == strip_timing_column(w8),
                "worker counts 1 and 8 disagree");
  fs::remove_all(fs::temp_directory_path() / "qevo_acceptance_w1");
  fs::remove_all(fs::temp_directory_path() / "qevo_acceptance_w8");
  return {4, "monotonicity and determinism", check.passed(), check.detail(), 0.0};
}

// ---------------------------------------------------------------------------
// 5-6-8. Benchmark-trend reproduction on the reference configurations.

struct TrendData {
  std::vector<BatchResult> qieo;
  std::vector<BatchResult> ga;
};

TrendData run_reference_batches() {
  TrendData data;
  ExperimentManifest manifest;  // defaults; compare-style resolution below
  for (const FunctionId function :
       {FunctionId::Ackley, FunctionId::Rosenbrock, FunctionId::Rastrigin}) {
    const int dim = default_dimension(function);
    const ProblemSpec spec = build_problem(manifest, function, dim);
    const ReferenceConfig ref = reference_config(function);
    for (const Algorithm algorithm : {Algorithm::Qieo, Algorithm::Ga}) {
      BatchResult batch;
      batch.algorithm = algorithm;
      batch.spec = spec;
      batch.config = build_run_config(
          manifest, reference_population(algorithm, function));
      batch.config.delta_theta = ref.qieo_delta_theta;
      batch.config.ga.crossover_probability = kReferenceCrossoverProbability;
      batch.config.ga.mutation_rate_per_bit = kReferenceMutationRate;
      batch.batch_seed =
          derive_seed(kSuiteSeed, stream_tag(StreamKind::Batch),
                      algorithm == Algorithm::Qieo ? 1u : 2u,
                      static_cast<std::uint64_t>(function) + 1u,
                      static_cast<std::uint64_t>(dim),
                      static_cast<std::uint64_t>(batch.config.population_size));
      batch.trials = run_trials(algorithm, spec, batch.config, 30,
                                batch.batch_seed);
      (algorithm == Algorithm::Qieo ? data.qieo : data.ga)
          .push_back(std::move(batch));
    }
  }
  return data;
}

CriterionResult criterion_5(const TrendData& data) {
  Check check;
  const char* names[] = {"ackley", "rosenbrock", "rastrigin"};
  const double band_low[] = {200.0, 40.0, 40.0};
  const double band_high[] = {800.0, 170.0, 150.0};
  const double min_success[] = {0.9, 1.0, 1.0};

  for (std::size_t i = 0; i < 3; ++i) {
    const auto& qieo = data.qieo[i];
    const auto& ga = data.ga[i];
    const double q_median = median_evaluations(qieo.trials);
    const double g_median = median_evaluations(ga.trials);
    check.require(q_median < g_median,
                  std::string(names[i]) + " median evals " + fmt(q_median) +
                      " !< " + fmt(g_median));

    const SummaryStats q_stats = summarize(qieo.trials, Metric::Generations);
    check.require(q_stats.success_rate >= min_success[i],
                  std::string(names[i]) + " success " +
                      fmt(q_stats.success_rate));
    check.require(q_stats.mean_generations >= band_low[i] &&
                      q_stats.mean_generations <= band_high[i],
                  std::string(names[i]) + " mean gens " +
                      fmt(q_stats.mean_generations) + " outside [" +
                      fmt(band_low[i]) + ", " + fmt(band_high[i]) + "]");
    check.note(std::string(names[i]) + ": qieo " + fmt(q_median) + " vs ga " +
               fmt(g_median) + " evals, success " + fmt(q_stats.success_rate) +
               ", gens " + fmt(q_stats.mean_generations));
  }
  return {5, "benchmark-trend reproduction", check.passed(), check.detail(), 0.0};
}

CriterionResult criterion_6(const TrendData& data) {
  Check check;
  const char* names[] = {"ackley", "rosenbrock", "rastrigin"};
  int tighter = 0;
  std::string detail;
  for (std::size_t i = 0; i < 3; ++i) {
    const double q_iqr = iqr_evaluations(data.qieo[i].trials);
    const double g_iqr = iqr_evaluations(data.ga[i].trials);
    if (q_iqr <= g_iqr) ++tighter;
    detail += std::string(i == 0 ? "" : "; ") + names[i] + " IQR qieo " +
              fmt(q_iqr) + " vs ga " + fmt(g_iqr);
  }
  check.require(tighter >= 2, "QIEO spread tighter on only " +
                                  std::to_string(tighter) + "/3 functions");
  check.note(detail);
  return {6, "variance claim", check.passed(), check.detail(), 0.0};
}

CriterionResult criterion_8(const TrendData& data) {
  Check check;
  const auto rows = compare_report(data.qieo, data.ga);
  std::string detail;
  for (const auto& row : rows) {
    // Wall-clock speedups are hardware-bound: emitted, never asserted.
    check.require(std::isfinite(row.wall_clock_ratio) && row.wall_clock_ratio > 0.0,
                  "wall-clock ratio not emitted");
    detail += std::string(detail.empty() ? "" : "; ") +
              function_name(row.function) + " wall-clock ratio " +
              fmt(row.wall_clock_ratio) + ", eval ratio " +
              fmt(row.evaluation_ratio);
  }
  check.note(detail + " (informational)");
  return {8, "speedup ratios emitted", check.passed(), check.detail(), 0.0};
}

// ---------------------------------------------------------------------------
// 7. Dimension-scaling trend on the Ackley sweep at fixed population.

CriterionResult criterion_7() {
  Check check;
  RunConfig qieo_config;
  qieo_config.population_size = 100;

  RunConfig ga_config = qieo_config;
  ga_config.ga.crossover_probability = kReferenceCrossoverProbability;
  ga_config.ga.mutation_rate_per_bit = kReferenceMutationRate;

  const std::vector<int> dims(std::begin(kDefaultDimensions),
                              std::end(kDefaultDimensions));
  const auto qieo = sweep_dimensions(Algorithm::Qieo, FunctionId::Ackley, dims,
                                     100, qieo_config, 30,
                                     derive_seed(kSuiteSeed, 7, 1),
                                     kDefaultBitsPerVariable);
  const auto ga = sweep_dimensions(Algorithm::Ga, FunctionId::Ackley, dims, 100,
                                   ga_config, 30, derive_seed(kSuiteSeed, 7, 2),
                                   kDefaultBitsPerVariable);
  std::string detail;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const double q = summarize(qieo[i].trials, Metric::Fitness).success_rate;
    const double g = summarize(ga[i].trials, Metric::Fitness).success_rate;
    if (dims[i] >= 10) {
      check.require(q >= g, "dim " + std::to_string(dims[i]) + ": qieo " +
                                fmt(q) + " < ga " + fmt(g));
    }
    detail += std::string(detail.empty() ? "" : " ") + "d" +
              std::to_string(dims[i]) + ":" + fmt(q) + "/" + fmt(g);
  }
  check.note("success qieo/ga per dim: " + detail);
  return {7, "dimension-scaling trend", check.passed(), check.detail(), 0.0};
}

template <class Fn>
CriterionResult timed(Fn&& fn, double limit_seconds = 0.0) {
  const auto start = std::chrono::steady_clock::now();
  CriterionResult result = fn();
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (limit_seconds > 0.0 && result.seconds > limit_seconds) {
    result.passed = false;
    result.detail += (result.detail.empty() ? "" : "; ") + std::string("over the ") +
                     fmt(limit_seconds) + "s runtime limit";
  }
  return result;
}

void print_result(const CriterionResult& result) {
  std::printf("[%s] criterion %d: %s (%.1fs)%s%s\n",
              result.passed ? "PASS" : "FAIL", result.number,
              result.title.c_str(), result.seconds,
              result.detail.empty() ? "" : " -- ", result.detail.c_str());
  std::fflush(stdout);
}

}  // namespace

int main() {
  std::vector<CriterionResult> results;
  results.push_back(timed(criterion_1, 1.0));
  print_result(results.back());
  results.push_back(timed(criterion_2, 10.0));
  print_result(results.back());
  results.push_back(timed(criterion_3, 30.0));
  print_result(results.back());
  results.push_back(timed(criterion_4, 60.0));
  print_result(results.back());

  const auto start_trend = std::chrono::steady_clock::now();
  const TrendData trend = run_reference_batches();
  const double trend_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                    start_trend)
          .count();
  std::printf("       reference batches: 30 trials x 6 configurations in %.1fs\n",
              trend_seconds);

  results.push_back(timed([&] { return criterion_5(trend); }));
  print_result(results.back());
  results.push_back(timed([&] { return criterion_6(trend); }));
  print_result(results.back());
  results.push_back(timed(criterion_7));
  print_result(results.back());
  results.push_back(timed([&] { return criterion_8(trend); }));
  print_result(results.back());

  int failed = 0;
  for (const auto& result : results) {
    failed += result.passed ? 0 : 1;
  }
  if (failed == 0) {
    std::printf("acceptance: all %zu criteria passed\n", results.size());
  } else {
    std::printf("acceptance: %d of %zu criteria FAILED\n", failed,
                results.size());
  }
  return failed == 0 ? 0 : 1;
}
