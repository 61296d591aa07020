#include "qevo/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

namespace qevo {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json optional_to_json(const std::optional<double>& value) {
  if (value) {
    return *value;
  }
  return nullptr;
}

void optional_from_json(const ordered_json& j, const char* key,
                        std::optional<double>& out) {
  if (j.contains(key) && !j.at(key).is_null()) {
    out = j.at(key).get<double>();
  } else {
    out = std::nullopt;
  }
}

}  // namespace

std::string manifest_to_json(const ExperimentManifest& m) {
  ordered_json j;
  j["command"] = m.command;
  j["algorithms"] = ordered_json::array();
  for (const auto a : m.algorithms) {
    j["algorithms"].push_back(algorithm_name(a));
  }
  j["functions"] = ordered_json::array();
  for (const auto f : m.functions) {
    j["functions"].push_back(function_name(f));
  }
  j["dimension"] = m.dimension;
  j["populations"] = m.populations;
  j["trials"] = m.trials;
  j["base_seed"] = m.base_seed;
  j["bits_per_variable"] = m.bits_per_variable;
  j["lower_bound"] = optional_to_json(m.lower_bound);
  j["upper_bound"] = optional_to_json(m.upper_bound);
  j["tolerance"] = optional_to_json(m.tolerance);
  j["max_generations"] = m.max_generations;
  j["stagnation_epsilon"] = m.stagnation_epsilon;
  j["stagnation_window"] = m.stagnation_window;
  j["delta_theta"] = optional_to_json(m.delta_theta);
  j["crossover_probability"] = optional_to_json(m.crossover_probability);
  j["mutation_rate"] = optional_to_json(m.mutation_rate);
  j["record_curve"] = m.record_curve;
  j["dimensions"] = m.dimensions;
  j["sweep_population"] = m.sweep_population;
  j["output_dir"] = m.output_dir;
  j["formats"] = m.formats;
  j["workers"] = m.workers;
  return j.dump(2);
}

ExperimentManifest manifest_from_json(const std::string& text) {
  const ordered_json j = ordered_json::parse(text);
  ExperimentManifest m;
  if (j.contains("command")) m.command = j.at("command").get<std::string>();
  if (j.contains("algorithms")) {
    m.algorithms.clear();
    for (const auto& name : j.at("algorithms")) {
      m.algorithms.push_back(parse_algorithm(name.get<std::string>()));
    }
  }
  if (j.contains("functions")) {
    m.functions.clear();
    for (const auto& name : j.at("functions")) {
      m.functions.push_back(parse_function_id(name.get<std::string>()));
    }
  }
  if (j.contains("dimension")) m.dimension = j.at("dimension").get<int>();
  if (j.contains("populations"))
    m.populations = j.at("populations").get<std::vector<int>>();
  if (j.contains("trials")) m.trials = j.at("trials").get<int>();
  if (j.contains("base_seed"))
    m.base_seed = j.at("base_seed").get<std::uint64_t>();
  if (j.contains("bits_per_variable"))
    m.bits_per_variable = j.at("bits_per_variable").get<int>();
  optional_from_json(j, "lower_bound", m.lower_bound);
  optional_from_json(j, "upper_bound", m.upper_bound);
  optional_from_json(j, "tolerance", m.tolerance);
  if (j.contains("max_generations"))
    m.max_generations = j.at("max_generations").get<int>();
  if (j.contains("stagnation_epsilon"))
    m.stagnation_epsilon = j.at("stagnation_epsilon").get<double>();
  if (j.contains("stagnation_window"))
    m.stagnation_window = j.at("stagnation_window").get<int>();
  optional_from_json(j, "delta_theta", m.delta_theta);
  optional_from_json(j, "crossover_probability", m.crossover_probability);
  optional_from_json(j, "mutation_rate", m.mutation_rate);
  if (j.contains("record_curve"))
    m.record_curve = j.at("record_curve").get<bool>();
  if (j.contains("dimensions"))
    m.dimensions = j.at("dimensions").get<std::vector<int>>();
  if (j.contains("sweep_population"))
    m.sweep_population = j.at("sweep_population").get<int>();
  if (j.contains("output_dir"))
    m.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("formats"))
    m.formats = j.at("formats").get<std::vector<std::string>>();
  if (j.contains("workers")) m.workers = j.at("workers").get<int>();
  return m;
}

int resolved_dimension(const ExperimentManifest& manifest, FunctionId function) {
  return manifest.dimension > 0 ? manifest.dimension
                                : default_dimension(function);
}

ProblemSpec build_problem(const ExperimentManifest& manifest, FunctionId function,
                          int dimension) {
  const Bounds box = default_bounds(function);
  const double lower = manifest.lower_bound.value_or(box.lower);
  const double upper = manifest.upper_bound.value_or(box.upper);
  ProblemSpec spec;
  spec.function = function;
  spec.dimension = dimension;
  spec.layout = GenomeLayout::uniform(dimension, lower, upper,
                                      manifest.bits_per_variable);
  spec.target_tolerance =
      manifest.tolerance.value_or(default_tolerance(function));
  spec.validate();
  return spec;
}

RunConfig build_run_config(const ExperimentManifest& manifest, int population) {
  RunConfig config;
  config.population_size = population;
  config.max_generations = manifest.max_generations;
  config.stagnation_epsilon = manifest.stagnation_epsilon;
  config.stagnation_window = manifest.stagnation_window;
  config.delta_theta = manifest.delta_theta.value_or(kDefaultDeltaTheta);
  config.ga.crossover_probability = manifest.crossover_probability.value_or(0.9);
  config.ga.mutation_rate_per_bit = manifest.mutation_rate.value_or(-1.0);
  config.record_curve = manifest.record_curve;
  return config;
}

namespace {

// Pre-scan for --config so file values become the defaults flags override.
std::optional<std::string> find_config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      return args[i + 1];
    }
    if (args[i].rfind("--config=", 0) == 0) {
      return args[i].substr(9);
    }
  }
  return std::nullopt;
}

std::vector<Algorithm> to_algorithms(const std::vector<std::string>& names) {
  std::vector<Algorithm> out;
  out.reserve(names.size());
  for (const auto& name : names) {
    out.push_back(parse_algorithm(name));
  }
  return out;
}

std::vector<FunctionId> to_functions(const std::vector<std::string>& names) {
  std::vector<FunctionId> out;
  out.reserve(names.size());
  for (const auto& name : names) {
    out.push_back(parse_function_id(name));
  }
  return out;
}

}  // namespace

ParsedCommand parse_args(const std::vector<std::string>& args) {
  ParsedCommand parsed;
  ExperimentManifest& m = parsed.manifest;

  if (const auto config_path = find_config_path(args)) {
    std::ifstream in(*config_path);
    if (!in) {
      parsed.error = "cannot open config file: " + *config_path;
      parsed.exit_code = 1;
      return parsed;
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
      m = manifest_from_json(buffer.str());
    } catch (const std::exception& failure) {
      parsed.error =
          "invalid config file " + *config_path + ": " + failure.what();
      parsed.exit_code = 1;
      return parsed;
    }
  }

  CLI::App app{"Quantum-inspired evolutionary optimization benchmark"};
  app.require_subcommand(1);

  std::vector<std::string> algo_names;
  std::vector<std::string> function_names;
  for (const auto a : m.algorithms) algo_names.emplace_back(algorithm_name(a));
  for (const auto f : m.functions) function_names.emplace_back(function_name(f));

  double lower = m.lower_bound.value_or(0.0);
  double upper = m.upper_bound.value_or(0.0);
  double tolerance = m.tolerance.value_or(0.0);
  double mutation = m.mutation_rate.value_or(0.0);
  double delta_theta = m.delta_theta.value_or(kDefaultDeltaTheta);
  double crossover = m.crossover_probability.value_or(0.9);

  bool explicit_function = false;
  std::string config_path_sink;  // consumed by the pre-scan; bound here so
                                 // CLI11 accepts and documents the flag

  const auto add_common = [&](CLI::App* cmd, bool with_populations) {
    cmd->add_option("--config", config_path_sink,
                    "JSON config file (defaults for all flags)");
    cmd->add_option("--algo", algo_names, "Algorithms to run (qieo, ga)")
        ->delimiter(',')
        ->check(CLI::IsMember({"qieo", "ga"}));
    cmd->add_option("--function", function_names,
                    "Objective functions (ackley, rosenbrock, rastrigin)")
        ->delimiter(',')
        ->check(CLI::IsMember({"ackley", "rosenbrock", "rastrigin"}))
        ->each([&](const std::string&) { explicit_function = true; });
    cmd->add_option("--dim", m.dimension,
                    "Problem dimension (default: per-function benchmark value)")
        ->check(CLI::PositiveNumber);
    if (with_populations) {
      cmd->add_option("--pop", m.populations,
                      "Population size(s); default is the benchmark sweep list")
          ->delimiter(',')
          ->check(CLI::PositiveNumber);
    }
    cmd->add_option("--trials", m.trials, "Trials per batch")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", m.base_seed, "Base seed for trial derivation");
    cmd->add_option("--bits", m.bits_per_variable, "Bits per design variable")
        ->check(CLI::Range(1, 32));
    cmd->add_option("--lower", lower, "Lower bound override (all variables)");
    cmd->add_option("--upper", upper, "Upper bound override (all variables)");
    cmd->add_option("--tolerance", tolerance, "Target tolerance override")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-generations", m.max_generations, "Generation cap")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--stagnation-epsilon", m.stagnation_epsilon,
                    "Minimum best-fitness improvement per window")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--stagnation-window", m.stagnation_window,
                    "Stagnation window in generations")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--delta-theta", delta_theta, "Rotation step (radians)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--crossover-probability", crossover,
                    "Crossover probability")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--mutation-rate", mutation,
                    "Per-bit mutation rate (default 1/total_bits)")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_flag("--record-curve", m.record_curve,
                  "Write per-trial convergence curves");
    cmd->add_option("--output", m.output_dir, "Output directory");
    cmd->add_option("--format", m.formats, "Output formats (csv, json)")
        ->delimiter(',')
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--workers", m.workers,
                    "Worker threads (0 = QEVO_WORKERS env, then hardware)");
  };

  CLI::App* run = app.add_subcommand("run", "Run trial batches");
  add_common(run, true);

  CLI::App* sweep_pop =
      app.add_subcommand("sweep-pop", "Population-size sweep");
  add_common(sweep_pop, true);

  CLI::App* sweep_dim = app.add_subcommand("sweep-dim", "Dimension sweep");
  add_common(sweep_dim, false);
  sweep_dim->add_option("--pop", m.sweep_population,
                        "Fixed population size for the sweep")
      ->check(CLI::PositiveNumber);
  sweep_dim->add_option("--dims", m.dimensions, "Dimensions to sweep")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);

  CLI::App* compare = app.add_subcommand(
      "compare", "Benchmark-configuration comparison of GA vs QIEO");
  add_common(compare, false);

  CLI::App* validate =
      app.add_subcommand("validate", "Run the invariant self-checks");
  validate->add_option("--workers", m.workers, "Worker threads");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("qevo-bench");
  for (const auto& arg : args) {
    argv.push_back(arg.c_str());
  }

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    parsed.show_help = true;
    parsed.help_text = app.help();
    return parsed;
  } catch (const CLI::CallForAllHelp&) {
    parsed.show_help = true;
    parsed.help_text = app.help("", CLI::AppFormatMode::All);
    return parsed;
  } catch (const CLI::ParseError& failure) {
    parsed.error = std::string(failure.what()) + "\n\n" + app.help();
    parsed.exit_code = failure.get_exit_code() == 0 ? 1 : failure.get_exit_code();
    return parsed;
  }

  for (CLI::App* sub : {run, sweep_pop, sweep_dim, compare, validate}) {
    if (sub->parsed()) {
      m.command = sub->get_name();
    }
  }

  m.algorithms = to_algorithms(algo_names);
  m.functions = to_functions(function_names);
  // The dimension study targets Ackley unless functions were picked
  // explicitly.
  if (m.command == "sweep-dim" && !explicit_function) {
    m.functions = {FunctionId::Ackley};
  }

  CLI::App* active = app.get_subcommands().front();
  const auto flag_given = [&](const std::string& name) {
    const CLI::Option* option = active->get_option_no_throw(name);
    return option != nullptr && option->count() > 0;
  };
  if (flag_given("--lower")) m.lower_bound = lower;
  if (flag_given("--upper")) m.upper_bound = upper;
  if (flag_given("--tolerance")) m.tolerance = tolerance;
  if (flag_given("--mutation-rate")) m.mutation_rate = mutation;
  if (flag_given("--delta-theta")) m.delta_theta = delta_theta;
  if (flag_given("--crossover-probability")) m.crossover_probability = crossover;

  if (m.lower_bound && m.upper_bound && !(*m.lower_bound < *m.upper_bound)) {
    parsed.error = "--lower must be strictly below --upper";
    parsed.exit_code = 1;
    return parsed;
  }
  return parsed;
}

}  // namespace qevo
