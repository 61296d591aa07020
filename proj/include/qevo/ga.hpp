#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "qevo/encoding.hpp"
#include "qevo/harness.hpp"

namespace qevo {

struct Individual {
  BitString bits;
  double fitness = 0.0;
  bool evaluated = false;
};

// One tournament slot: two members drawn uniformly with replacement, lower
// fitness wins, the first draw wins ties. All members must be evaluated.
const Individual& tournament_pick(std::span<const Individual> population,
                                  RandomStream& rng);

// Mating pool of population.size() winners drawn from one stream.
std::vector<Individual> binary_tournament(const std::vector<Individual>& population,
                                          RandomStream& rng);

// Suffix swap at `cut` (in [1, total_bits - 1]): children are
// a[0:cut]+b[cut:] and b[0:cut]+a[cut:], both marked unevaluated.
std::pair<Individual, Individual> crossover_at(const Individual& a,
                                               const Individual& b, int cut);

// With probability p_c picks a uniform cut and swaps suffixes; otherwise
// returns unevaluated copies of the parents.
std::pair<Individual, Individual> single_point_crossover(const Individual& a,
                                                         const Individual& b,
                                                         double crossover_probability,
                                                         RandomStream& rng);

// Flips each bit independently with probability `rate`; result unevaluated.
Individual mutate(const Individual& individual, double rate, RandomStream& rng);

// mu+lambda truncation: the n lowest-fitness members of parents+offspring,
// returned in ascending fitness order. Ties prefer parents, then lower index.
std::vector<Individual> survivor_selection(const std::vector<Individual>& parents,
                                           const std::vector<Individual>& offspring);

// Generational GA loop: tournament selection, single-point crossover,
// per-bit mutation, offspring evaluation, elitist truncation survival.
TrialResult run_ga(const ProblemSpec& spec, const RunConfig& config,
                   std::uint64_t seed);

}  // namespace qevo
