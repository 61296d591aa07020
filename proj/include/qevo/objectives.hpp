#pragma once

#include <cstdint>
#include <numbers>
#include <span>
#include <string>

#include "qevo/encoding.hpp"

namespace qevo {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class FunctionId { Ackley, Rosenbrock, Rastrigin };

const char* function_name(FunctionId id) noexcept;
FunctionId parse_function_id(const std::string& name);  // throws on unknown name

// Conventional search boxes and the benchmark protocol's target tolerances.
struct Bounds {
  double lower;
  double upper;
};
Bounds default_bounds(FunctionId id) noexcept;      // ±32.768 / ±2.048 / ±5.12
double default_tolerance(FunctionId id) noexcept;   // 1e-3 / 1e-3 / 1e-6
int default_dimension(FunctionId id) noexcept;      // 10 / 2 / 2

// One optimization problem instance: which function, over which genome.
struct ProblemSpec {
  FunctionId function = FunctionId::Ackley;
  int dimension = 10;
  GenomeLayout layout;
  double rastrigin_amplitude = 10.0;  // A
  double rastrigin_frequency = kTwoPi;  // c
  double target_tolerance = 1e-3;

  void validate() const;  // throws std::invalid_argument
};

// Problem with the conventional box, tolerance and bit width for `id`.
ProblemSpec make_problem(FunctionId id, int dimension,
                         int bits_per_variable = kDefaultBitsPerVariable);

// f(x) = -20 exp(-0.2 sqrt(mean x_i^2)) - exp(mean cos(2 pi x_i)) + 20 + e
double ackley(std::span<const double> x);

// f(x) = sum_{i<n-1} [ 100 (x_{i+1} - x_i^2)^2 + (x_i - 1)^2 ]
double rosenbrock(std::span<const double> x);

// f(x) = A n + sum [ x_i^2 - A cos(c x_i) ]
double rastrigin(std::span<const double> x, double amplitude = 10.0,
                 double frequency = kTwoPi);

double objective_value(const ProblemSpec& spec, std::span<const double> x);

// Every objective call in a run goes through `evaluate`, which ticks exactly
// one counter unit, so "number of function evaluations" means the same thing
// for every algorithm.
struct EvalCounter {
  std::uint64_t value = 0;
};

double evaluate(const ProblemSpec& spec, const BitString& genome,
                EvalCounter& counter);
// No-allocation variant for hot loops; scratch must have spec.dimension slots.
double evaluate(const ProblemSpec& spec, const BitString& genome,
                EvalCounter& counter, std::span<double> scratch);

}  // namespace qevo
