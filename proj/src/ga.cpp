#include "qevo/ga.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qevo {

namespace {

void require_evaluated(std::span<const Individual> population,
                       const char* where) {
  for (const auto& member : population) {
    if (!member.evaluated) {
      throw std::invalid_argument(std::string(where) +
                                  ": unevaluated individual in population");
    }
  }
}

void flip_bits_in_place(Individual& individual, double rate, RandomStream& rng) {
  individual.evaluated = false;
  const std::size_t n = individual.bits.size();
  if (rate <= 0.0) {
    return;
  }
  if (rate >= 1.0) {
    for (auto& bit : individual.bits.bits) {
      bit ^= 1;
    }
    return;
  }
  // Geometric gap sampling: equivalent to an independent coin per bit but
  // costs O(expected flips) instead of O(bits).
  const double log_keep = std::log1p(-rate);
  std::size_t position = 0;
  while (true) {
    const double u = 1.0 - rng.next_double();  // (0, 1]
    const double gap = std::floor(std::log(u) / log_keep);
    if (gap >= static_cast<double>(n)) {
      break;
    }
    position += static_cast<std::size_t>(gap);
    if (position >= n) {
      break;
    }
    individual.bits.bits[position] ^= 1;
    ++position;
  }
}

}  // namespace

const Individual& tournament_pick(std::span<const Individual> population,
                                  RandomStream& rng) {
  const auto n = static_cast<std::uint64_t>(population.size());
  const std::uint64_t first = rng.next_below(n);
  const std::uint64_t second = rng.next_below(n);
  const Individual& a = population[static_cast<std::size_t>(first)];
  const Individual& b = population[static_cast<std::size_t>(second)];
  return a.fitness <= b.fitness ? a : b;
}

std::vector<Individual> binary_tournament(const std::vector<Individual>& population,
                                          RandomStream& rng) {
  if (population.empty()) {
    throw std::invalid_argument("binary_tournament: empty population");
  }
  require_evaluated(population, "binary_tournament");
  std::vector<Individual> pool;
  pool.reserve(population.size());
  for (std::size_t k = 0; k < population.size(); ++k) {
    pool.push_back(tournament_pick(population, rng));
  }
  return pool;
}

std::pair<Individual, Individual> crossover_at(const Individual& a,
                                               const Individual& b, int cut) {
  if (a.bits.size() != b.bits.size()) {
    throw std::invalid_argument("crossover: genome length mismatch");
  }
  const int total = static_cast<int>(a.bits.size());
  if (cut < 1 || cut >= total) {
    throw std::invalid_argument("crossover: cut outside [1, total_bits - 1]");
  }
  Individual first{a.bits, 0.0, false};
  Individual second{b.bits, 0.0, false};
  for (std::size_t i = static_cast<std::size_t>(cut); i < a.bits.size(); ++i) {
    first.bits.bits[i] = b.bits.bits[i];
    second.bits.bits[i] = a.bits.bits[i];
  }
  return {std::move(first), std::move(second)};
}

std::pair<Individual, Individual> single_point_crossover(const Individual& a,
                                                         const Individual& b,
                                                         double crossover_probability,
                                                         RandomStream& rng) {
  if (a.bits.size() != b.bits.size()) {
    throw std::invalid_argument("crossover: genome length mismatch");
  }
  const auto total = static_cast<std::uint64_t>(a.bits.size());
  if (total >= 2 && rng.next_double() < crossover_probability) {
    const int cut = 1 + static_cast<int>(rng.next_below(total - 1));
    return crossover_at(a, b, cut);
  }
  return {Individual{a.bits, 0.0, false}, Individual{b.bits, 0.0, false}};
}

Individual mutate(const Individual& individual, double rate, RandomStream& rng) {
  if (rate < 0.0 || rate > 1.0) {
    throw std::invalid_argument("mutate: rate outside [0, 1]");
  }
  Individual result{individual.bits, 0.0, false};
  flip_bits_in_place(result, rate, rng);
  return result;
}

std::vector<Individual> survivor_selection(const std::vector<Individual>& parents,
                                           const std::vector<Individual>& offspring) {
  if (parents.size() != offspring.size() || parents.empty()) {
    throw std::invalid_argument(
        "survivor_selection: parents and offspring must have equal size");
  }
  require_evaluated(parents, "survivor_selection");
  require_evaluated(offspring, "survivor_selection");

  const std::size_t n = parents.size();
  // Index 0..n-1 = parents, n..2n-1 = offspring; the index order doubles as
  // the documented tie-break (parents first, then lower index).
  std::vector<std::uint32_t> order(2 * n);
  std::iota(order.begin(), order.end(), 0u);
  const auto fitness_of = [&](std::uint32_t id) {
    return id < n ? parents[id].fitness : offspring[id - n].fitness;
  };
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    const double fa = fitness_of(a);
    const double fb = fitness_of(b);
    if (fa != fb) {
      return fa < fb;
    }
    return a < b;
  });

  std::vector<Individual> survivors;
  survivors.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::uint32_t id = order[k];
    survivors.push_back(id < n ? parents[id] : offspring[id - n]);
  }
  return survivors;
}

TrialResult run_ga(const ProblemSpec& spec, const RunConfig& config,
                   std::uint64_t seed) {
  spec.validate();
  config.validate(Algorithm::Ga);

  const auto start = std::chrono::steady_clock::now();
  const auto elapsed_ns = [&start] {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
               std::chrono::steady_clock::now() - start)
        .count();
  };

  const int n = config.population_size;
  const int total_bits = spec.layout.total_bits();
  const double crossover_probability = config.ga.crossover_probability;
  const double mutation_rate = config.ga.resolved_mutation_rate(total_bits);

  EvalCounter evals;
  std::vector<double> scratch(static_cast<std::size_t>(spec.dimension));
  std::vector<double> best_history;
  best_history.reserve(static_cast<std::size_t>(config.max_generations) + 1);

  TrialResult result;
  result.seed = seed;

  std::vector<Individual> population(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    RandomStream rng(derive_seed(seed, stream_tag(StreamKind::GaInit),
                                 static_cast<std::uint64_t>(k)));
    auto& member = population[static_cast<std::size_t>(k)];
    member.bits = random_bitstring(spec.layout, rng);
    member.fitness = evaluate(spec, member.bits, evals, scratch);
    member.evaluated = true;
  }

  double best_fitness = population.front().fitness;
  std::size_t best_index = 0;
  for (std::size_t k = 1; k < population.size(); ++k) {
    if (population[k].fitness < best_fitness) {
      best_fitness = population[k].fitness;
      best_index = k;
    }
  }
  BitString best_bits = population[best_index].bits;

  const auto observe = [&](int generation) {
    best_history.push_back(best_fitness);
    if (config.record_curve) {
      result.curve.push_back({generation, best_fitness, elapsed_ns()});
    }
  };

  int generation = 0;
  observe(generation);
  std::optional<TerminationReason> reason =
      check_termination({generation, best_history}, config, spec);

  std::vector<Individual> pool;
  std::vector<Individual> offspring;
  while (!reason) {
    ++generation;
    const auto gen_word = static_cast<std::uint64_t>(generation);

    pool.clear();
    pool.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      RandomStream rng(derive_seed(seed, stream_tag(StreamKind::GaSelection),
                                   gen_word, static_cast<std::uint64_t>(k)));
      pool.push_back(tournament_pick(population, rng));
    }

    offspring.clear();
    offspring.reserve(static_cast<std::size_t>(n));
    const int pairs = n / 2;
    for (int k = 0; k < pairs; ++k) {
      RandomStream rng(derive_seed(seed, stream_tag(StreamKind::GaCrossover),
                                   gen_word, static_cast<std::uint64_t>(k)));
      auto children =
          single_point_crossover(pool[static_cast<std::size_t>(2 * k)],
                                 pool[static_cast<std::size_t>(2 * k + 1)],
                                 crossover_probability, rng);
      offspring.push_back(std::move(children.first));
      offspring.push_back(std::move(children.second));
    }
    if (n % 2 == 1) {
      // Odd pool: the leftover winner passes through to mutation unpaired.
      offspring.push_back(
          Individual{pool[static_cast<std::size_t>(n - 1)].bits, 0.0, false});
    }

    for (int k = 0; k < n; ++k) {
      RandomStream rng(derive_seed(seed, stream_tag(StreamKind::GaMutation),
                                   gen_word, static_cast<std::uint64_t>(k)));
      auto& child = offspring[static_cast<std::size_t>(k)];
      flip_bits_in_place(child, mutation_rate, rng);
      child.fitness = evaluate(spec, child.bits, evals, scratch);
      child.evaluated = true;
    }

    population = survivor_selection(population, offspring);
    if (population.front().fitness < best_fitness) {
      best_fitness = population.front().fitness;
      best_bits = population.front().bits;
    }

    observe(generation);
    reason = check_termination({generation, best_history}, config, spec);
  }

  result.best_fitness = best_fitness;
  result.best_bits = best_bits;
  result.generations_run = generation;
  result.evaluations = evals.value;
  result.success = best_fitness <= spec.target_tolerance;
  result.termination = *reason;
  result.elapsed_ns = elapsed_ns();
  return result;
}

}  // namespace qevo
