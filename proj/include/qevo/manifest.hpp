#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qevo/harness.hpp"

namespace qevo {

// Fully resolved experiment configuration: what the CLI parsed, what every
// output directory echoes back, and what a config file contains. Every field
// has a default and the whole struct round-trips through JSON losslessly.
struct ExperimentManifest {
  std::string command = "run";  // run | sweep-pop | sweep-dim | compare | validate

  std::vector<Algorithm> algorithms = {Algorithm::Qieo, Algorithm::Ga};
  std::vector<FunctionId> functions = {FunctionId::Ackley, FunctionId::Rosenbrock,
                                       FunctionId::Rastrigin};

  // 0 keeps each function's benchmark default (ackley 10, others 2).
  int dimension = 0;
  std::vector<int> populations{std::begin(kDefaultPopulations),
                               std::end(kDefaultPopulations)};
  int trials = 30;
  std::uint64_t base_seed = 1;

  int bits_per_variable = kDefaultBitsPerVariable;
  std::optional<double> lower_bound;  // scalar override, replicated per variable
  std::optional<double> upper_bound;
  std::optional<double> tolerance;  // override of the per-function default

  int max_generations = 3000;
  double stagnation_epsilon = 1e-8;
  int stagnation_window = 50;
  // Unset fields fall back to the library defaults (0.01 pi, 0.9, 1/total_bits)
  // except under `compare`, which substitutes its per-function reference
  // values for whatever is left unset.
  std::optional<double> delta_theta;
  std::optional<double> crossover_probability;
  std::optional<double> mutation_rate;
  bool record_curve = false;

  // sweep-dim settings
  std::vector<int> dimensions{std::begin(kDefaultDimensions),
                              std::end(kDefaultDimensions)};
  int sweep_population = 100;

  std::string output_dir = "results";
  std::vector<std::string> formats = {"csv", "json"};
  int workers = 0;  // 0 = QEVO_WORKERS env var, then hardware concurrency

  bool operator==(const ExperimentManifest&) const = default;
};

std::string manifest_to_json(const ExperimentManifest& manifest);
ExperimentManifest manifest_from_json(const std::string& text);

// Problem/config pair for one (algorithm, function, population) cell.
ProblemSpec build_problem(const ExperimentManifest& manifest, FunctionId function,
                          int dimension);
RunConfig build_run_config(const ExperimentManifest& manifest, int population);

// Resolved dimension for a function: manifest override or benchmark default.
int resolved_dimension(const ExperimentManifest& manifest, FunctionId function);

struct ParsedCommand {
  ExperimentManifest manifest;
  bool show_help = false;
  std::string help_text;
  std::string error;  // nonempty when parsing failed
  int exit_code = 0;
};

// Parses CLI arguments (without the program name). Flags override config-file
// values, which override defaults; unknown flags and invalid values produce
// an error naming the offending flag.
ParsedCommand parse_args(const std::vector<std::string>& args);

}  // namespace qevo
