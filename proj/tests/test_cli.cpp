#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "qevo/manifest.hpp"
#include "qevo/report.hpp"

using namespace qevo;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// trials.csv body with the trailing elapsed_ns column removed; timing is the
// only nondeterministic content in the file.
std::string strip_timing_column(const std::string& csv) {
  std::stringstream out;
  std::stringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    const auto cut = line.rfind(',');
    out << line.substr(0, cut) << '\n';
  }
  return out.str();
}

std::vector<BatchResult> small_batches(bool record_curve = false) {
  ExperimentManifest manifest;
  manifest.record_curve = record_curve;
  const ProblemSpec spec = build_problem(manifest, FunctionId::Rastrigin, 2);
  RunConfig config = build_run_config(manifest, 12);
  config.max_generations = 20;
  config.record_curve = record_curve;

  BatchResult batch;
  batch.algorithm = Algorithm::Qieo;
  batch.spec = spec;
  batch.config = config;
  batch.batch_seed = 404;
  batch.trials = run_trials(Algorithm::Qieo, spec, config, 5, 404, 1);
  return {batch};
}

}  // namespace

TEST_CASE("the benchmark-row flags produce the matching manifest") {
  const ParsedCommand parsed = parse_args({"run", "--algo", "qieo", "--function",
                                           "rastrigin", "--dim", "2", "--pop",
                                           "100", "--trials", "30", "--seed",
                                           "42"});
  REQUIRE(parsed.error.empty());
  const ExperimentManifest& m = parsed.manifest;
  CHECK(m.command == "run");
  CHECK(m.algorithms == std::vector<Algorithm>{Algorithm::Qieo});
  CHECK(m.functions == std::vector<FunctionId>{FunctionId::Rastrigin});
  CHECK(m.dimension == 2);
  CHECK(m.populations == std::vector<int>{100});
  CHECK(m.trials == 30);
  CHECK(m.base_seed == 42);

  const ProblemSpec spec = build_problem(m, FunctionId::Rastrigin, 2);
  CHECK(spec.target_tolerance == 1e-6);
  CHECK(spec.layout.lower_bounds[0] == -5.12);
  const RunConfig config = build_run_config(m, 100);
  CHECK(config.population_size == 100);
  CHECK(config.max_generations == 3000);
  CHECK(config.delta_theta == doctest::Approx(kDefaultDeltaTheta));
}

TEST_CASE("run without flags keeps the full default grid") {
  const ParsedCommand parsed = parse_args({"run"});
  REQUIRE(parsed.error.empty());
  const ExperimentManifest& m = parsed.manifest;
  CHECK(m.algorithms.size() == 2);
  CHECK(m.functions.size() == 3);
  CHECK(m.populations.size() == 12);
  CHECK(m.populations.front() == 10);
  CHECK(m.populations.back() == 10000);
  CHECK(m.trials == 30);
  CHECK(m.dimension == 0);
  CHECK(resolved_dimension(m, FunctionId::Ackley) == 10);
  CHECK(resolved_dimension(m, FunctionId::Rosenbrock) == 2);
}

TEST_CASE("invalid and unknown flags are rejected with the flag named") {
  const ParsedCommand zero_pop = parse_args({"run", "--pop", "0"});
  CHECK_FALSE(zero_pop.error.empty());
  CHECK(zero_pop.exit_code != 0);
  CHECK(zero_pop.error.find("--pop") != std::string::npos);

  const ParsedCommand unknown = parse_args({"run", "--frobnicate"});
  CHECK_FALSE(unknown.error.empty());
  CHECK(unknown.exit_code != 0);

  const ParsedCommand no_command = parse_args({});
  CHECK_FALSE(no_command.error.empty());
}

TEST_CASE("explicit overrides land in the manifest") {
  const ParsedCommand parsed = parse_args(
      {"run", "--lower", "-1.5", "--upper", "2.5", "--tolerance", "1e-4",
       "--delta-theta", "0.02", "--crossover-probability", "0.5",
       "--mutation-rate", "0.25", "--bits", "12", "--record-curve",
       "--format", "csv", "--workers", "3"});
  REQUIRE(parsed.error.empty());
  const ExperimentManifest& m = parsed.manifest;
  CHECK(m.lower_bound == 1.5 * -1.0);
  CHECK(m.upper_bound == 2.5);
  CHECK(m.tolerance == 1e-4);
  CHECK(m.delta_theta == 0.02);
  CHECK(m.crossover_probability == 0.5);
  CHECK(m.mutation_rate == 0.25);
  CHECK(m.bits_per_variable == 12);
  CHECK(m.record_curve);
  CHECK(m.formats == std::vector<std::string>{"csv"});
  CHECK(m.workers == 3);

  const ProblemSpec spec = build_problem(m, FunctionId::Ackley, 3);
  CHECK(spec.layout.lower_bounds[0] == -1.5);
  CHECK(spec.layout.upper_bounds[2] == 2.5);
  CHECK(spec.layout.bits_per_variable == 12);
  CHECK(spec.target_tolerance == 1e-4);
}

TEST_CASE("manifests round-trip through JSON losslessly") {
  ExperimentManifest m;
  CHECK(manifest_from_json(manifest_to_json(m)) == m);

  m.command = "sweep-dim";
  m.algorithms = {Algorithm::Ga};
  m.functions = {FunctionId::Rosenbrock, FunctionId::Rastrigin};
  m.dimension = 7;
  m.populations = {33, 44};
  m.trials = 9;
  m.base_seed = 123456789012345ULL;
  m.bits_per_variable = 18;
  m.lower_bound = -0.125;
  m.upper_bound = 17.75;
  m.tolerance = 3.5e-5;
  m.max_generations = 123;
  m.stagnation_epsilon = 1e-7;
  m.stagnation_window = 9;
  m.delta_theta = 0.0123;
  m.crossover_probability = 0.61;
  m.mutation_rate = 0.015625;
  m.record_curve = true;
  m.dimensions = {3, 4, 5};
  m.sweep_population = 55;
  m.output_dir = "elsewhere";
  m.formats = {"json"};
  m.workers = 4;
  CHECK(manifest_from_json(manifest_to_json(m)) == m);
}

TEST_CASE("config files provide defaults that flags override") {
  ExperimentManifest base;
  base.trials = 11;
  base.bits_per_variable = 14;
  const fs::path path = fs::temp_directory_path() / "qevo_manifest_test.json";
  std::ofstream(path) << manifest_to_json(base);

  const ParsedCommand parsed =
      parse_args({"run", "--config", path.string(), "--trials", "4"});
  REQUIRE(parsed.error.empty());
  CHECK(parsed.manifest.trials == 4);             // flag wins
  CHECK(parsed.manifest.bits_per_variable == 14);  // file wins over default
  fs::remove(path);
}

TEST_CASE("emission writes the frozen artifact set") {
  const auto batches = small_batches();
  ExperimentManifest manifest;
  manifest.output_dir =
      (fs::temp_directory_path() / "qevo_emit_test").string();
  fs::remove_all(manifest.output_dir);
  emit_results(batches, manifest);

  const std::string trials = read_file(fs::path(manifest.output_dir) / "trials.csv");
  std::stringstream lines(trials);
  std::string header;
  std::getline(lines, header);
  CHECK(header ==
        "algorithm,function,dim,pop,seed,generations,evaluations,best_fitness,"
        "success,termination_reason,elapsed_ns");
  int rows = 0;
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 5);  // header + one row per trial

  CHECK(fs::exists(fs::path(manifest.output_dir) / "summary.json"));
  CHECK(fs::exists(fs::path(manifest.output_dir) / "manifest.json"));

  const ExperimentManifest echoed = manifest_from_json(
      read_file(fs::path(manifest.output_dir) / "manifest.json"));
  CHECK(echoed == manifest);
  fs::remove_all(manifest.output_dir);
}

TEST_CASE("summary quartiles match an independent recomputation from the csv") {
  const auto batches = small_batches();
  ExperimentManifest manifest;
  manifest.output_dir =
      (fs::temp_directory_path() / "qevo_summary_test").string();
  fs::remove_all(manifest.output_dir);
  emit_results(batches, manifest);

  // Re-read best_fitness out of trials.csv.
  std::vector<double> fitnesses;
  std::stringstream lines(
      read_file(fs::path(manifest.output_dir) / "trials.csv"));
  std::string line;
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) {
    std::stringstream fields(line);
    std::string field;
    for (int i = 0; i < 8; ++i) std::getline(fields, field, ',');
    fitnesses.push_back(std::stod(field));
  }
  REQUIRE(fitnesses.size() == 5);
  std::sort(fitnesses.begin(), fitnesses.end());
  // Independent quartile recomputation (linear interpolation rule).
  const auto quantile = [&](double p) {
    const double rank = p * static_cast<double>(fitnesses.size() - 1);
    const auto lo = static_cast<std::size_t>(rank);
    const double w = rank - static_cast<double>(lo);
    const auto hi = std::min(lo + 1, fitnesses.size() - 1);
    return fitnesses[lo] + (fitnesses[hi] - fitnesses[lo]) * w;
  };

  const auto summary = nlohmann::json::parse(
      read_file(fs::path(manifest.output_dir) / "summary.json"));
  const auto& fitness_block = summary.at(0).at("metrics").at("fitness");
  CHECK(fitness_block.at("q1").get<double>() ==
        doctest::Approx(quantile(0.25)).epsilon(1e-12));
  CHECK(fitness_block.at("median").get<double>() ==
        doctest::Approx(quantile(0.5)).epsilon(1e-12));
  CHECK(fitness_block.at("q3").get<double>() ==
        doctest::Approx(quantile(0.75)).epsilon(1e-12));
  CHECK(fitness_block.at("min").get<double>() == doctest::Approx(fitnesses.front()));
  CHECK(fitness_block.at("max").get<double>() == doctest::Approx(fitnesses.back()));
  fs::remove_all(manifest.output_dir);
}

TEST_CASE("re-emitting the same batches is byte-identical up to timing") {
  ExperimentManifest manifest;
  manifest.output_dir = (fs::temp_directory_path() / "qevo_det_a").string();
  ExperimentManifest manifest_b = manifest;
  manifest_b.output_dir = (fs::temp_directory_path() / "qevo_det_b").string();
  fs::remove_all(manifest.output_dir);
  fs::remove_all(manifest_b.output_dir);

  emit_results(small_batches(), manifest);
  emit_results(small_batches(), manifest_b);

  const std::string a = read_file(fs::path(manifest.output_dir) / "trials.csv");
  const std::string b = read_file(fs::path(manifest_b.output_dir) / "trials.csv");
  CHECK(strip_timing_column(a) == strip_timing_column(b));
  fs::remove_all(manifest.output_dir);
  fs::remove_all(manifest_b.output_dir);
}

TEST_CASE("curve files appear only when recording is on") {
  ExperimentManifest manifest;
  manifest.record_curve = true;
  manifest.output_dir = (fs::temp_directory_path() / "qevo_curves").string();
  fs::remove_all(manifest.output_dir);
  emit_results(small_batches(true), manifest);

  const fs::path curve =
      fs::path(manifest.output_dir) / "curve_qieo_rastrigin_d2_p12_t0.csv";
  REQUIRE(fs::exists(curve));
  std::stringstream lines(read_file(curve));
  std::string header;
  std::getline(lines, header);
  CHECK(header == "generation,best_fitness,elapsed_ns");
  fs::remove_all(manifest.output_dir);
}

TEST_CASE("emission fails loudly on an unwritable directory") {
  ExperimentManifest manifest;
  manifest.output_dir = "/proc/qevo_cannot_write_here";
  CHECK_THROWS(emit_results(small_batches(), manifest));
}

TEST_CASE("identical batches compare with unit ratios") {
  const auto batches = small_batches();
  const auto rows = compare_report(batches, batches);  // same spec both sides
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].evaluation_ratio == doctest::Approx(1.0));
  CHECK(rows[0].ga_evaluations == doctest::Approx(rows[0].qieo_evaluations));
}

TEST_CASE("comparison rejects mismatched problems") {
  auto qieo_batches = small_batches();
  auto ga_batches = small_batches();
  ga_batches[0].spec.target_tolerance = 0.5;
  CHECK_THROWS_AS(compare_report(qieo_batches, ga_batches),
                  std::invalid_argument);

  auto wrong_dim = small_batches();
  wrong_dim[0].spec = build_problem(ExperimentManifest{}, FunctionId::Rastrigin, 3);
  CHECK_THROWS_AS(compare_report(qieo_batches, wrong_dim),
                  std::invalid_argument);
}

TEST_CASE("reference rows pin the benchmark configuration") {
  CHECK(reference_population(Algorithm::Qieo, FunctionId::Ackley) == 100);
  CHECK(reference_population(Algorithm::Ga, FunctionId::Ackley) == 2000);
  CHECK(reference_population(Algorithm::Qieo, FunctionId::Rosenbrock) == 200);
  CHECK(reference_population(Algorithm::Ga, FunctionId::Rosenbrock) == 1000);
  CHECK(reference_population(Algorithm::Qieo, FunctionId::Rastrigin) == 100);
  CHECK(reference_population(Algorithm::Ga, FunctionId::Rastrigin) == 200);
}

TEST_CASE("round-trip safe double formatting") {
  for (const double v : {0.1, 1.0 / 3.0, 1e-300, 3.625384938440363, -0.0, 5.12}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("execute runs a small manifest end to end") {
  ExperimentManifest manifest;
  manifest.command = "run";
  manifest.algorithms = {Algorithm::Ga};
  manifest.functions = {FunctionId::Rastrigin};
  manifest.populations = {10};
  manifest.trials = 3;
  manifest.max_generations = 5;
  manifest.output_dir = (fs::temp_directory_path() / "qevo_execute_test").string();
  fs::remove_all(manifest.output_dir);

  std::ostringstream log;
  CHECK(execute(manifest, log) == 0);
  CHECK(fs::exists(fs::path(manifest.output_dir) / "trials.csv"));
  CHECK(fs::exists(fs::path(manifest.output_dir) / "summary.json"));
  CHECK(fs::exists(fs::path(manifest.output_dir) / "manifest.json"));
  CHECK(log.str().find("rastrigin") != std::string::npos);
  fs::remove_all(manifest.output_dir);
}

TEST_CASE("compare writes the comparison table") {
  ExperimentManifest manifest;
  manifest.command = "compare";
  manifest.functions = {FunctionId::Rastrigin};
  manifest.trials = 3;
  manifest.max_generations = 30;
  manifest.output_dir = (fs::temp_directory_path() / "qevo_compare_test").string();
  fs::remove_all(manifest.output_dir);

  std::ostringstream log;
  CHECK(execute(manifest, log) == 0);
  CHECK(fs::exists(fs::path(manifest.output_dir) / "comparison.csv"));
  const std::string table = read_file(fs::path(manifest.output_dir) / "comparison.csv");
  CHECK(table.find("rastrigin") != std::string::npos);
  CHECK(table.rfind("function,dimension,ga_population,", 0) == 0);
  fs::remove_all(manifest.output_dir);
}
