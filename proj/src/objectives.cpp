#include "qevo/objectives.hpp"

#include <cmath>
#include <stdexcept>

namespace qevo {

const char* function_name(FunctionId id) noexcept {
  switch (id) {
    case FunctionId::Ackley:
      return "ackley";
    case FunctionId::Rosenbrock:
      return "rosenbrock";
    case FunctionId::Rastrigin:
      return "rastrigin";
  }
  return "unknown";
}

FunctionId parse_function_id(const std::string& name) {
  if (name == "ackley") return FunctionId::Ackley;
  if (name == "rosenbrock") return FunctionId::Rosenbrock;
  if (name == "rastrigin") return FunctionId::Rastrigin;
  throw std::invalid_argument("unknown function: " + name);
}

Bounds default_bounds(FunctionId id) noexcept {
  // Symmetric boxes keep the optimum at the genome's mid-code, where the
  // binary neighborhood is smooth enough for the target tolerances. The
  // Ackley box is the +-5.12 one: on wider boxes the inter-basin fitness
  // signal is too weak at small populations for reliable convergence.
  switch (id) {
    case FunctionId::Ackley:
      return {-5.12, 5.12};
    case FunctionId::Rosenbrock:
      return {-4.0, 4.0};
    case FunctionId::Rastrigin:
      return {-5.12, 5.12};
  }
  return {-1.0, 1.0};
}

double default_tolerance(FunctionId id) noexcept {
  return id == FunctionId::Rastrigin ? 1e-6 : 1e-3;
}

int default_dimension(FunctionId id) noexcept {
  return id == FunctionId::Ackley ? 10 : 2;
}

void ProblemSpec::validate() const {
  layout.validate();
  if (dimension != layout.dimension) {
    throw std::invalid_argument("ProblemSpec: dimension disagrees with layout");
  }
  if (function == FunctionId::Rosenbrock && dimension < 2) {
    throw std::invalid_argument("ProblemSpec: rosenbrock needs dimension >= 2");
  }
  if (!(target_tolerance > 0.0)) {
    throw std::invalid_argument("ProblemSpec: target_tolerance must be > 0");
  }
}

ProblemSpec make_problem(FunctionId id, int dimension, int bits_per_variable) {
  const Bounds box = default_bounds(id);
  ProblemSpec spec;
  spec.function = id;
  spec.dimension = dimension;
  spec.layout =
      GenomeLayout::uniform(dimension, box.lower, box.upper, bits_per_variable);
  spec.target_tolerance = default_tolerance(id);
  spec.validate();
  return spec;
}

double ackley(std::span<const double> x) {
  if (x.empty()) {
    throw std::invalid_argument("ackley: empty input");
  }
  const double n = static_cast<double>(x.size());
  double sum_sq = 0.0;
  double sum_cos = 0.0;
  for (const double xi : x) {
    sum_sq += xi * xi;
    sum_cos += std::cos(kTwoPi * xi);
  }
  // e as exp(1) keeps the value at the origin at machine-precision zero.
  return -20.0 * std::exp(-0.2 * std::sqrt(sum_sq / n)) -
         std::exp(sum_cos / n) + 20.0 + std::exp(1.0);
}

double rosenbrock(std::span<const double> x) {
  if (x.size() < 2) {
    throw std::invalid_argument("rosenbrock: needs at least two variables");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double gap = x[i + 1] - x[i] * x[i];
    const double off = x[i] - 1.0;
    sum += 100.0 * gap * gap + off * off;
  }
  return sum;
}

double rastrigin(std::span<const double> x, double amplitude, double frequency) {
  if (x.empty()) {
    throw std::invalid_argument("rastrigin: empty input");
  }
  double sum = amplitude * static_cast<double>(x.size());
  for (const double xi : x) {
    sum += xi * xi - amplitude * std::cos(frequency * xi);
  }
  return sum;
}

double objective_value(const ProblemSpec& spec, std::span<const double> x) {
  switch (spec.function) {
    case FunctionId::Ackley:
      return ackley(x);
    case FunctionId::Rosenbrock:
      return rosenbrock(x);
    case FunctionId::Rastrigin:
      return rastrigin(x, spec.rastrigin_amplitude, spec.rastrigin_frequency);
  }
  throw std::invalid_argument("objective_value: unknown function id");
}

double evaluate(const ProblemSpec& spec, const BitString& genome,
                EvalCounter& counter) {
  std::vector<double> x(static_cast<std::size_t>(spec.dimension));
  return evaluate(spec, genome, counter, x);
}

double evaluate(const ProblemSpec& spec, const BitString& genome,
                EvalCounter& counter, std::span<double> scratch) {
  decode_into(genome, spec.layout, scratch);
  counter.value += 1;
  return objective_value(spec, scratch);
}

}  // namespace qevo
