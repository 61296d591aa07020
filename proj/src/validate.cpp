#include "qevo/validate.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "qevo/ga.hpp"
#include "qevo/qieo.hpp"
#include "qevo/report.hpp"

namespace qevo {

namespace {

CheckResult check(const std::string& name, bool passed,
                  const std::string& detail = "") {
  return {name, passed, detail};
}

CheckResult check_decode_endpoints() {
  for (const FunctionId function :
       {FunctionId::Ackley, FunctionId::Rosenbrock, FunctionId::Rastrigin}) {
    const ProblemSpec spec = make_problem(function, 3);
    BitString zeros(static_cast<std::size_t>(spec.layout.total_bits()));
    BitString ones(static_cast<std::size_t>(spec.layout.total_bits()));
    for (auto& bit : ones.bits) bit = 1;
    const auto lo = decode(zeros, spec.layout);
    const auto hi = decode(ones, spec.layout);
    for (int i = 0; i < spec.dimension; ++i) {
      if (lo[static_cast<std::size_t>(i)] != spec.layout.lower_bounds[0] ||
          hi[static_cast<std::size_t>(i)] != spec.layout.upper_bounds[0]) {
        return check("decode endpoints hit the bounds", false,
                     function_name(function));
      }
    }
  }
  return check("decode endpoints hit the bounds", true);
}

CheckResult check_decode_monotone() {
  const GenomeLayout layout = GenomeLayout::uniform(1, -3.0, 7.0, 6);
  double previous = -1e300;
  for (int code = 0; code < 64; ++code) {
    BitString bits(6);
    for (int k = 0; k < 6; ++k) {
      bits.set(static_cast<std::size_t>(k),
               static_cast<std::uint8_t>((code >> (5 - k)) & 1));
    }
    const double x = decode(bits, layout)[0];
    if (!(x > previous)) {
      return check("decode is strictly monotone in the code", false,
                   "code " + std::to_string(code));
    }
    previous = x;
  }
  return check("decode is strictly monotone in the code", true);
}

CheckResult check_theta_lookup() {
  BitString best(4);
  best.bits = {0, 1, 0, 1};
  std::vector<BitString> measured(1, BitString(4));
  measured[0].bits = {0, 0, 1, 1};
  const ThetaMatrix thetas = compute_thetas(measured, best, 0.25);
  const bool ok = thetas.theta(0, 0) == 0.0 && thetas.theta(0, 1) == 0.25 &&
                  thetas.theta(0, 2) == -0.25 && thetas.theta(0, 3) == 0.0;
  return check("rotation-angle lookup matches the truth table", ok);
}

CheckResult check_rotation_normalization() {
  QuantumPopulation population = init_quantum_population(1, 4);
  ThetaMatrix thetas(1, 4, 0.01 * std::numbers::pi);
  for (int i = 0; i < 4; ++i) {
    thetas.row_data(0)[i] = static_cast<std::int8_t>(i % 2 == 0 ? 1 : -1);
  }
  for (int step = 0; step < 10000; ++step) {
    rotate_in_place(population, thetas);
  }
  for (int i = 0; i < 4; ++i) {
    const double a = population.individuals[0].alphas[static_cast<std::size_t>(i)];
    const double b = population.individuals[0].betas[static_cast<std::size_t>(i)];
    if (std::abs(a * a + b * b - 1.0) > 1e-9) {
      return check("amplitudes stay normalized across rotations", false);
    }
  }
  return check("amplitudes stay normalized across rotations", true);
}

CheckResult check_measurement_balance() {
  QuantumPopulation population = init_quantum_population(10, 100);
  RandomStream rng(derive_seed(2024, 7));
  std::uint64_t ones = 0;
  std::uint64_t total = 0;
  for (int round = 0; round < 100; ++round) {
    const auto measured = measure(population, rng);
    for (const auto& bits : measured) {
      for (const auto bit : bits.bits) {
        ones += bit;
      }
      total += bits.size();
    }
  }
  const double fraction = static_cast<double>(ones) / static_cast<double>(total);
  std::ostringstream detail;
  detail << "ones fraction " << fraction << " over " << total << " bits";
  return check("fresh-population measurement is balanced",
               fraction > 0.49 && fraction < 0.51, detail.str());
}

CheckResult check_zero_delta_uniformity() {
  // With a zero rotation step the population never leaves the uniform
  // superposition, so measured bits must stay indistinguishable from fair
  // coin flips (chi-square on 1 degree of freedom, p > 0.001).
  const ProblemSpec spec = make_problem(FunctionId::Rastrigin, 2);
  const int n = 25;
  const int m = spec.layout.total_bits();
  QuantumPopulation population = init_quantum_population(n, m);
  std::vector<BitString> measured(n, BitString(static_cast<std::size_t>(m)));
  EvalCounter evals;
  std::vector<double> scratch(2);
  BitString best_bits;
  double best = std::numeric_limits<double>::infinity();
  std::uint64_t ones = 0;
  std::uint64_t total = 0;
  const std::uint64_t seed = 99;
  for (int generation = 0; generation < 100; ++generation) {
    for (int j = 0; j < n; ++j) {
      RandomStream rng(derive_seed(seed, stream_tag(StreamKind::Measurement),
                                   static_cast<std::uint64_t>(generation),
                                   static_cast<std::uint64_t>(j)));
      measure_individual_into(population.individuals[static_cast<std::size_t>(j)],
                              rng, measured[static_cast<std::size_t>(j)]);
      for (const auto bit : measured[static_cast<std::size_t>(j)].bits) {
        ones += bit;
      }
      total += static_cast<std::uint64_t>(m);
      const double f = evaluate(spec, measured[static_cast<std::size_t>(j)],
                                evals, scratch);
      if (f < best) {
        best = f;
        best_bits = measured[static_cast<std::size_t>(j)];
      }
    }
    const ThetaMatrix thetas = compute_thetas(measured, best_bits, 0.0);
    rotate_in_place(population, thetas);
  }
  const double expected = static_cast<double>(total) / 2.0;
  const double d0 = static_cast<double>(total - ones) - expected;
  const double d1 = static_cast<double>(ones) - expected;
  const double chi_square = (d0 * d0 + d1 * d1) / expected;
  std::ostringstream detail;
  detail << "chi-square " << chi_square << " over " << total << " bits";
  // 10.828 is the 1-dof critical value at p = 0.001.
  return check("zero rotation step keeps measurements uniform",
               chi_square < 10.828, detail.str());
}

CheckResult check_ga_no_variation() {
  const ProblemSpec spec = make_problem(FunctionId::Rastrigin, 2);
  RunConfig config;
  config.population_size = 20;
  config.max_generations = 60;
  config.stagnation_epsilon = 0.0;  // never stagnate, exercise the cap
  config.ga.crossover_probability = 0.0;
  config.ga.mutation_rate_per_bit = 0.0;
  config.record_curve = true;
  const TrialResult result = run_ga(spec, config, 11);
  for (const auto& point : result.curve) {
    if (point.best_fitness != result.curve.front().best_fitness) {
      return check("GA without variation keeps a constant best", false);
    }
  }
  return check("GA without variation keeps a constant best", true);
}

CheckResult check_determinism() {
  const ProblemSpec spec = make_problem(FunctionId::Rastrigin, 2);
  RunConfig config;
  config.population_size = 30;
  config.max_generations = 40;
  for (const Algorithm algorithm : {Algorithm::Qieo, Algorithm::Ga}) {
    const auto a = run_trials(algorithm, spec, config, 6, 31, 1);
    const auto b = run_trials(algorithm, spec, config, 6, 31, 2);
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (a[k].best_bits != b[k].best_bits ||
          a[k].best_fitness != b[k].best_fitness ||
          a[k].generations_run != b[k].generations_run ||
          a[k].evaluations != b[k].evaluations) {
        return check("trials are deterministic across worker counts", false,
                     algorithm_name(algorithm));
      }
    }
  }
  return check("trials are deterministic across worker counts", true);
}

CheckResult check_curve_monotone() {
  const ProblemSpec spec = make_problem(FunctionId::Ackley, 2);
  RunConfig config;
  config.population_size = 20;
  config.max_generations = 80;
  config.record_curve = true;
  for (const Algorithm algorithm : {Algorithm::Qieo, Algorithm::Ga}) {
    const auto results = run_trials(algorithm, spec, config, 3, 5, 1);
    for (const auto& trial : results) {
      for (std::size_t i = 1; i < trial.curve.size(); ++i) {
        if (trial.curve[i].best_fitness > trial.curve[i - 1].best_fitness) {
          return check("convergence curves never increase", false,
                       algorithm_name(algorithm));
        }
      }
    }
  }
  return check("convergence curves never increase", true);
}

CheckResult check_evaluation_accounting() {
  const ProblemSpec spec = make_problem(FunctionId::Rastrigin, 2);
  RunConfig config;
  config.population_size = 17;
  config.max_generations = 25;
  for (const Algorithm algorithm : {Algorithm::Qieo, Algorithm::Ga}) {
    const auto results = run_trials(algorithm, spec, config, 2, 77, 1);
    for (const auto& trial : results) {
      const auto expected =
          static_cast<std::uint64_t>(config.population_size) *
          (static_cast<std::uint64_t>(trial.generations_run) + 1);
      if (trial.evaluations != expected) {
        return check("evaluations equal population x (generations + 1)", false,
                     algorithm_name(algorithm));
      }
    }
  }
  return check("evaluations equal population x (generations + 1)", true);
}

CheckResult check_survivor_truncation() {
  const auto individual = [](double fitness) {
    Individual member;
    member.bits = BitString(4);
    member.fitness = fitness;
    member.evaluated = true;
    return member;
  };
  const std::vector<Individual> parents = {individual(1), individual(3),
                                           individual(5), individual(7)};
  const std::vector<Individual> offspring = {individual(2), individual(4),
                                             individual(6), individual(8)};
  const auto survivors = survivor_selection(parents, offspring);
  const bool ok = survivors.size() == 4 && survivors[0].fitness == 1 &&
                  survivors[1].fitness == 2 && survivors[2].fitness == 3 &&
                  survivors[3].fitness == 4;
  return check("survivor selection keeps the best half", ok);
}

}  // namespace

std::vector<CheckResult> run_validation_suite() {
  return {
      check_decode_endpoints(),     check_decode_monotone(),
      check_theta_lookup(),         check_rotation_normalization(),
      check_measurement_balance(),  check_zero_delta_uniformity(),
      check_ga_no_variation(),      check_determinism(),
      check_curve_monotone(),       check_evaluation_accounting(),
      check_survivor_truncation(),
  };
}

}  // namespace qevo
