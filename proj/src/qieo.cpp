#include "qevo/qieo.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace qevo {

namespace {

void require_same_shape(const QuantumPopulation& population,
                        const ThetaMatrix& thetas) {
  if (thetas.rows() != population.size() ||
      population.size() == 0 ||
      thetas.cols() != population.num_qubits()) {
    throw std::invalid_argument("rotate: theta matrix shape mismatch");
  }
  for (const auto& individual : population.individuals) {
    if (individual.num_qubits() != thetas.cols() ||
        individual.betas.size() != individual.alphas.size()) {
      throw std::invalid_argument("rotate: ragged quantum population");
    }
  }
}

}  // namespace

ThetaMatrix::ThetaMatrix(int rows, int cols, double delta_theta)
    : rows_(rows),
      cols_(cols),
      delta_theta_(delta_theta),
      steps_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0) {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("ThetaMatrix: sizes must be positive");
  }
  if (delta_theta < 0.0) {
    throw std::invalid_argument("ThetaMatrix: delta_theta must be >= 0");
  }
}

QuantumPopulation init_quantum_population(int population_size, int num_qubits) {
  if (population_size < 1 || num_qubits < 1) {
    throw std::invalid_argument(
        "init_quantum_population: sizes must be positive");
  }
  const double amplitude = std::sqrt(0.5);
  QuantumPopulation population;
  population.individuals.resize(static_cast<std::size_t>(population_size));
  for (auto& individual : population.individuals) {
    individual.alphas.assign(static_cast<std::size_t>(num_qubits), amplitude);
    individual.betas.assign(static_cast<std::size_t>(num_qubits), amplitude);
  }
  return population;
}

void measure_individual_into(const QuantumIndividual& individual,
                             RandomStream& rng, BitString& out) {
  const std::size_t m = individual.alphas.size();
  if (out.size() != m) {
    throw std::invalid_argument("measure: output length mismatch");
  }
  const double* alpha = individual.alphas.data();
  std::uint8_t* bit = out.bits.data();
  for (std::size_t i = 0; i < m; ++i) {
    const double p_zero = alpha[i] * alpha[i];
    bit[i] = rng.next_double() > p_zero ? 1 : 0;
  }
}

std::vector<BitString> measure(const QuantumPopulation& population,
                               RandomStream& rng) {
  std::vector<BitString> measured;
  measured.reserve(population.individuals.size());
  for (const auto& individual : population.individuals) {
    BitString bits(static_cast<std::size_t>(individual.num_qubits()));
    measure_individual_into(individual, rng, bits);
    measured.push_back(std::move(bits));
  }
  return measured;
}

void compute_thetas_into(const std::vector<BitString>& measured,
                         const BitString& best, ThetaMatrix& out) {
  if (static_cast<int>(measured.size()) != out.rows()) {
    throw std::invalid_argument("compute_thetas: row count mismatch");
  }
  const std::size_t m = best.size();
  if (m != static_cast<std::size_t>(out.cols())) {
    throw std::invalid_argument("compute_thetas: best string length mismatch");
  }
  for (int j = 0; j < out.rows(); ++j) {
    const BitString& bits = measured[static_cast<std::size_t>(j)];
    if (bits.size() != m) {
      throw std::invalid_argument("compute_thetas: string length mismatch");
    }
    std::int8_t* row = out.row_data(j);
    for (std::size_t i = 0; i < m; ++i) {
      // Equal bits keep the qubit still; a mismatch rotates one step toward
      // the best bit (+delta raises P(1), -delta raises P(0)).
      row[i] = static_cast<std::int8_t>(static_cast<int>(best.bits[i]) -
                                        static_cast<int>(bits.bits[i]));
    }
  }
}

ThetaMatrix compute_thetas(const std::vector<BitString>& measured,
                           const BitString& best, double delta_theta) {
  if (measured.empty()) {
    throw std::invalid_argument("compute_thetas: no measured strings");
  }
  ThetaMatrix thetas(static_cast<int>(measured.size()),
                     static_cast<int>(best.size()), delta_theta);
  compute_thetas_into(measured, best, thetas);
  return thetas;
}

void rotate_in_place(QuantumPopulation& population, const ThetaMatrix& thetas) {
  require_same_shape(population, thetas);
  const double cos_step = std::cos(thetas.delta_theta());
  const double sin_step = std::sin(thetas.delta_theta());
  for (int j = 0; j < population.size(); ++j) {
    auto& individual = population.individuals[static_cast<std::size_t>(j)];
    const std::int8_t* row = thetas.row_data(j);
    double* alpha = individual.alphas.data();
    double* beta = individual.betas.data();
    const std::size_t m = individual.alphas.size();
    for (std::size_t i = 0; i < m; ++i) {
      if (row[i] == 0) {
        continue;
      }
      const double sin_theta = row[i] > 0 ? sin_step : -sin_step;
      const double a = alpha[i];
      const double b = beta[i];
      alpha[i] = cos_step * a - sin_theta * b;
      beta[i] = sin_theta * a + cos_step * b;
    }
  }
}

QuantumPopulation rotate(const QuantumPopulation& population,
                         const ThetaMatrix& thetas) {
  QuantumPopulation next = population;
  rotate_in_place(next, thetas);
  return next;
}

TrialResult run_qieo(const ProblemSpec& spec, const RunConfig& config,
                     std::uint64_t seed) {
  spec.validate();
  config.validate(Algorithm::Qieo);

  const auto start = std::chrono::steady_clock::now();
  const auto elapsed_ns = [&start] {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
               std::chrono::steady_clock::now() - start)
        .count();
  };

  const int n = config.population_size;
  const int m = spec.layout.total_bits();

  QuantumPopulation population = init_quantum_population(n, m);
  std::vector<BitString> measured(static_cast<std::size_t>(n),
                                  BitString(static_cast<std::size_t>(m)));
  ThetaMatrix thetas(n, m, config.delta_theta);
  EvalCounter evals;
  std::vector<double> scratch(static_cast<std::size_t>(spec.dimension));
  std::vector<double> best_history;
  best_history.reserve(static_cast<std::size_t>(config.max_generations) + 1);

  BestRecord best;
  best.fitness = std::numeric_limits<double>::infinity();

  TrialResult result;
  result.seed = seed;

  const auto measure_generation = [&](int generation) {
    for (int j = 0; j < n; ++j) {
      RandomStream rng(derive_seed(seed, stream_tag(StreamKind::Measurement),
                                   static_cast<std::uint64_t>(generation),
                                   static_cast<std::uint64_t>(j)));
      measure_individual_into(population.individuals[static_cast<std::size_t>(j)],
                              rng, measured[static_cast<std::size_t>(j)]);
    }
  };
  const auto evaluate_generation = [&](int generation) {
    for (int j = 0; j < n; ++j) {
      const BitString& bits = measured[static_cast<std::size_t>(j)];
      const double fitness = evaluate(spec, bits, evals, scratch);
      if (fitness < best.fitness) {
        best.fitness = fitness;
        best.bits = bits;
        best.found_at_generation = generation;
      }
    }
    best_history.push_back(best.fitness);
    if (config.record_curve) {
      result.curve.push_back({generation, best.fitness, elapsed_ns()});
    }
  };

  int generation = 0;
  measure_generation(generation);
  evaluate_generation(generation);
  std::optional<TerminationReason> reason =
      check_termination({generation, best_history}, config, spec);

  while (!reason) {
    compute_thetas_into(measured, best.bits, thetas);
    ++generation;
    rotate_in_place(population, thetas);
    measure_generation(generation);
    evaluate_generation(generation);
    reason = check_termination({generation, best_history}, config, spec);
  }

  result.best_fitness = best.fitness;
  result.best_bits = best.bits;
  result.generations_run = generation;
  result.evaluations = evals.value;
  result.success = best.fitness <= spec.target_tolerance;
  result.termination = *reason;
  result.elapsed_ns = elapsed_ns();
  return result;
}

}  // namespace qevo
