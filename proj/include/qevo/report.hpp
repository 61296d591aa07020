#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qevo/harness.hpp"
#include "qevo/manifest.hpp"

namespace qevo {

// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

// "qieo_ackley_d10_p100"; prefixes the curve file names and summary entries.
std::string batch_id(const BatchResult& batch);

// Frozen column set:
// algorithm,function,dim,pop,seed,generations,evaluations,best_fitness,
// success,termination_reason,elapsed_ns
void write_trials_csv(std::ostream& out, std::span<const BatchResult> batches);

// Frozen column set: generation,best_fitness,elapsed_ns
void write_curve_csv(std::ostream& out, const TrialResult& trial);

std::string summary_to_json(std::span<const BatchResult> batches);

// Writes into manifest.output_dir: trials.csv plus per-trial curve files when
// recorded ("csv" format), summary.json ("json" format), and manifest.json
// always. Throws std::runtime_error when the directory or a file cannot be
// written. All content is deterministic except the elapsed_ns timing columns.
void emit_results(const std::vector<BatchResult>& batches,
                  const ExperimentManifest& manifest);

// Benchmark reference configuration used by `compare` (and the acceptance
// suite): the population sizes at which each algorithm reaches the target
// tolerance reliably, and the calibrated per-function rotation step. The GA
// side runs the classic De Jong parameterization (p_c 0.6, fixed low
// mutation), matching the convergence profile the comparison targets.
struct ReferenceConfig {
  int qieo_population = 100;
  int ga_population = 2000;
  double qieo_delta_theta = kDefaultDeltaTheta;
};

ReferenceConfig reference_config(FunctionId function) noexcept;
int reference_population(Algorithm algorithm, FunctionId function) noexcept;

inline constexpr double kReferenceCrossoverProbability = 0.6;
inline constexpr double kReferenceMutationRate = 0.01;

struct ComparisonRow {
  FunctionId function = FunctionId::Ackley;
  int dimension = 0;
  int ga_population = 0;
  int qieo_population = 0;
  double ga_success_rate = 0.0;
  double qieo_success_rate = 0.0;
  double ga_mean_generations = 0.0;
  double qieo_mean_generations = 0.0;
  // Headline accounting: population x mean generations.
  double ga_evaluations = 0.0;
  double qieo_evaluations = 0.0;
  // Raw counter means (include the initial-population evaluations).
  double ga_raw_evaluations = 0.0;
  double qieo_raw_evaluations = 0.0;
  double ga_mean_elapsed_ns = 0.0;
  double qieo_mean_elapsed_ns = 0.0;
  double evaluation_ratio = 0.0;  // GA / QIEO, headline accounting
  double wall_clock_ratio = 0.0;  // GA / QIEO, informational only
};

// Pairs batches index-by-index; both sides must target the same function,
// dimension, tolerance and genome layout (populations may differ).
// Throws std::invalid_argument on a mismatch.
std::vector<ComparisonRow> compare_report(std::span<const BatchResult> qieo,
                                          std::span<const BatchResult> ga);

void write_comparison_csv(std::ostream& out, std::span<const ComparisonRow> rows);
void print_comparison(std::ostream& out, std::span<const ComparisonRow> rows);

// Runs a parsed manifest end to end; returns the process exit code
// (0 iff every requested batch completed).
int execute(const ExperimentManifest& manifest, std::ostream& log);

}  // namespace qevo
