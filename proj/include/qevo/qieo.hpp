#pragma once

#include <cstdint>
#include <vector>

#include "qevo/encoding.hpp"
#include "qevo/harness.hpp"

namespace qevo {

// One probabilistic bit model: real amplitude pair with alpha^2 + beta^2 = 1.
// alpha^2 is the probability of measuring 0.
struct QuantumIndividual {
  std::vector<double> alphas;
  std::vector<double> betas;

  int num_qubits() const noexcept { return static_cast<int>(alphas.size()); }
};

struct QuantumPopulation {
  std::vector<QuantumIndividual> individuals;

  int size() const noexcept { return static_cast<int>(individuals.size()); }
  int num_qubits() const noexcept {
    return individuals.empty() ? 0 : individuals.front().num_qubits();
  }
};

// Best string observed so far in a run, the attractor for rotation updates.
struct BestRecord {
  BitString bits;
  double fitness = 0.0;
  int found_at_generation = 0;
};

// Per-qubit rotation angles; every entry is exactly -delta_theta, 0 or
// +delta_theta, stored as a sign so the magnitude never drifts.
class ThetaMatrix {
 public:
  ThetaMatrix(int rows, int cols, double delta_theta);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  double delta_theta() const noexcept { return delta_theta_; }

  int step(int row, int col) const noexcept {
    return steps_[static_cast<std::size_t>(row) * static_cast<std::size_t>(cols_) +
                  static_cast<std::size_t>(col)];
  }
  double theta(int row, int col) const noexcept {
    return static_cast<double>(step(row, col)) * delta_theta_;
  }

  std::int8_t* row_data(int row) noexcept {
    return steps_.data() +
           static_cast<std::size_t>(row) * static_cast<std::size_t>(cols_);
  }
  const std::int8_t* row_data(int row) const noexcept {
    return steps_.data() +
           static_cast<std::size_t>(row) * static_cast<std::size_t>(cols_);
  }

 private:
  int rows_;
  int cols_;
  double delta_theta_;
  std::vector<std::int8_t> steps_;
};

// Population of n individuals of m qubits each, every amplitude pair at
// (1/sqrt 2, 1/sqrt 2): the uniform superposition a Hadamard on |0> gives.
QuantumPopulation init_quantum_population(int population_size, int num_qubits);

// Collapses one individual: per qubit draw r uniform on [0,1) and emit 1
// iff r > alpha^2. `out` must already have num_qubits slots.
void measure_individual_into(const QuantumIndividual& individual,
                             RandomStream& rng, BitString& out);

// Collapses the whole population from a single stream, one string per
// individual, in index order.
std::vector<BitString> measure(const QuantumPopulation& population,
                               RandomStream& rng);

// Rotation-angle lookup against the best string, per qubit:
//   bit 0 vs best 0 -> 0, bit 0 vs best 1 -> +delta,
//   bit 1 vs best 0 -> -delta, bit 1 vs best 1 -> 0.
// Signs are chosen so a rotation nudges the measurement distribution toward
// the best string.
ThetaMatrix compute_thetas(const std::vector<BitString>& measured,
                           const BitString& best, double delta_theta);
void compute_thetas_into(const std::vector<BitString>& measured,
                         const BitString& best, ThetaMatrix& out);

// Applies the R_Y step per qubit:
//   alpha' = cos(theta) alpha - sin(theta) beta
//   beta'  = sin(theta) alpha + cos(theta) beta
QuantumPopulation rotate(const QuantumPopulation& population,
                         const ThetaMatrix& thetas);
void rotate_in_place(QuantumPopulation& population, const ThetaMatrix& thetas);

// Full run: Hadamard init, then measure / evaluate / rotate-toward-best
// generations until a termination criterion fires.
TrialResult run_qieo(const ProblemSpec& spec, const RunConfig& config,
                     std::uint64_t seed);

}  // namespace qevo
