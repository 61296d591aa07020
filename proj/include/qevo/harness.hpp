#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qevo/objectives.hpp"

namespace qevo {

enum class Algorithm { Qieo, Ga };

const char* algorithm_name(Algorithm a) noexcept;
Algorithm parse_algorithm(const std::string& name);  // throws on unknown name

inline constexpr double kDefaultDeltaTheta = 0.01 * std::numbers::pi;

// Paper protocol sweeps.
inline constexpr int kDefaultPopulations[] = {10,   20,   50,   100,
                                              200,  500,  1000, 2000,
                                              4000, 5000, 8000, 10000};
inline constexpr int kDefaultDimensions[] = {2, 5, 10, 20, 25, 30, 40, 50, 100};

struct GaParams {
  double crossover_probability = 0.9;
  // Negative means "use 1 / total_bits", resolved against the genome layout.
  double mutation_rate_per_bit = -1.0;

  double resolved_mutation_rate(int total_bits) const noexcept {
    return mutation_rate_per_bit >= 0.0 ? mutation_rate_per_bit
                                        : 1.0 / static_cast<double>(total_bits);
  }

  bool operator==(const GaParams&) const = default;
};

struct RunConfig {
  int population_size = 100;
  int max_generations = 3000;
  // A run stagnates when the best fitness improves by less than
  // stagnation_epsilon over the last stagnation_window generations.
  double stagnation_epsilon = 1e-8;
  int stagnation_window = 50;
  double delta_theta = kDefaultDeltaTheta;  // rotation step, QIEO only
  GaParams ga;                              // GA only
  bool record_curve = false;

  void validate(Algorithm algorithm) const;  // throws std::invalid_argument
  bool operator==(const RunConfig&) const = default;
};

enum class TerminationReason { TargetReached, MaxGenerations, Stagnation };

const char* termination_name(TerminationReason r) noexcept;

struct CurvePoint {
  int generation = 0;
  double best_fitness = 0.0;
  std::int64_t elapsed_ns = 0;
};

struct TrialResult {
  double best_fitness = 0.0;
  BitString best_bits;
  int generations_run = 0;
  std::uint64_t evaluations = 0;
  bool success = false;
  TerminationReason termination = TerminationReason::MaxGenerations;
  std::vector<CurvePoint> curve;  // empty unless RunConfig::record_curve
  std::uint64_t seed = 0;
  std::int64_t elapsed_ns = 0;
  std::string error;  // nonempty only when the trial itself failed
};

// Live state the termination test looks at. best_history[g] is the best
// fitness seen up to and including generation g.
struct RunProgress {
  int generation = 0;
  std::span<const double> best_history;
};

// Checked in priority order: target reached, generation cap, stagnation.
std::optional<TerminationReason> check_termination(const RunProgress& progress,
                                                   const RunConfig& config,
                                                   const ProblemSpec& spec);

// Five-number summary plus moments over a batch of trials.
struct SummaryStats {
  double minimum = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double maximum = 0.0;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for a single trial
  double success_rate = 0.0;
  double mean_generations = 0.0;
  double mean_evaluations = 0.0;
};

enum class Metric { Fitness, Generations, Evaluations };

// Quantile by linear interpolation between order statistics (the same rule
// as numpy's default); `sorted` must be ascending and nonempty.
double quantile_linear(std::span<const double> sorted, double p);

SummaryStats summarize(const std::vector<TrialResult>& results, Metric metric);

double metric_value(const TrialResult& result, Metric metric) noexcept;

// One batch = one (algorithm, problem, config) triple run for n trials.
struct BatchResult {
  Algorithm algorithm = Algorithm::Qieo;
  ProblemSpec spec;
  RunConfig config;
  std::uint64_t batch_seed = 0;
  std::vector<TrialResult> trials;
};

// Runs n trials with per-trial seeds derived from (base_seed, trial index).
// Trials execute on a bounded worker pool; output order is by trial index
// and is bit-identical for any worker count. A trial that throws is recorded
// with TrialResult::error set instead of aborting the batch.
// workers <= 0 resolves to the QEVO_WORKERS environment variable, then to
// the hardware thread count.
std::vector<TrialResult> run_trials(Algorithm algorithm, const ProblemSpec& spec,
                                    const RunConfig& config, int n_trials,
                                    std::uint64_t base_seed, int workers = 0);

int resolve_worker_count(int requested, int jobs);

// One 30-trial-style batch per population size, seeds independent per
// (size, trial).
std::vector<BatchResult> sweep_population_sizes(
    Algorithm algorithm, const ProblemSpec& spec, std::span<const int> sizes,
    const RunConfig& config, int n_trials, std::uint64_t base_seed,
    int workers = 0);

// Rebuilds the problem per dimension (bounds replicated) at a fixed
// population size. `problem_for_dimension` supplies the per-dimension spec.
std::vector<BatchResult> sweep_dimensions(
    Algorithm algorithm, std::span<const int> dimensions, int fixed_population,
    const RunConfig& config, int n_trials, std::uint64_t base_seed,
    const std::function<ProblemSpec(int)>& problem_for_dimension,
    int workers = 0);

// Convenience form using the conventional box and tolerance for `function`.
std::vector<BatchResult> sweep_dimensions(Algorithm algorithm,
                                          FunctionId function,
                                          std::span<const int> dimensions,
                                          int fixed_population,
                                          const RunConfig& config, int n_trials,
                                          std::uint64_t base_seed,
                                          int bits_per_variable,
                                          int workers = 0);

// Per-metric summaries for one sweep entry.
struct SummaryRow {
  std::int64_t key = 0;  // population size or dimension
  SummaryStats fitness;
  SummaryStats generations;
  SummaryStats evaluations;
};

std::vector<SummaryRow> summary_table(std::span<const BatchResult> batches,
                                      bool key_is_dimension);

}  // namespace qevo
