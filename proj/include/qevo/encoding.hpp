#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qevo/rng.hpp"

namespace qevo {

// 20 bits per variable keeps the decoding grid fine enough that the target
// tolerances used by the benchmark protocol (down to 1e-6) stay attainable;
// at 16 bits the grid point nearest the optimum already misses them.
inline constexpr int kDefaultBitsPerVariable = 20;

// Layout of a binary genome over the design variables: how many variables,
// how many bits each, and the per-variable search box.
struct GenomeLayout {
  int dimension = 0;
  int bits_per_variable = kDefaultBitsPerVariable;
  std::vector<double> lower_bounds;
  std::vector<double> upper_bounds;

  int total_bits() const noexcept { return dimension * bits_per_variable; }

  // Throws std::invalid_argument when the layout is malformed
  // (empty dimension, bit width outside [1, 32], inverted bounds).
  void validate() const;

  // Same box replicated over every variable.
  static GenomeLayout uniform(int dimension, double lower, double upper,
                              int bits_per_variable = kDefaultBitsPerVariable);
};

// Fixed-length {0,1} genome, the unit of measurement, crossover and
// mutation. Bit 0 of each variable slice is its most significant bit.
struct BitString {
  std::vector<std::uint8_t> bits;

  BitString() = default;
  explicit BitString(std::size_t length) : bits(length, 0) {}

  std::size_t size() const noexcept { return bits.size(); }
  std::uint8_t operator[](std::size_t i) const noexcept { return bits[i]; }
  void set(std::size_t i, std::uint8_t value) noexcept { bits[i] = value; }

  bool operator==(const BitString&) const = default;
};

// Unsigned big-endian integer code of one variable's bit slice.
std::uint64_t variable_code(const BitString& genome, const GenomeLayout& layout,
                            int variable);

// Maps a genome to a point in the search box:
//   x[i] = lower[i] + code_i * (upper[i] - lower[i]) / (2^bits - 1)
// so the all-zero and all-one codes land exactly on the bounds.
// Throws std::invalid_argument when the genome length does not match.
std::vector<double> decode(const BitString& genome, const GenomeLayout& layout);
void decode_into(const BitString& genome, const GenomeLayout& layout,
                 std::span<double> out);

// Uniform random genome, each bit an independent fair coin flip.
BitString random_bitstring(const GenomeLayout& layout, RandomStream& rng);

}  // namespace qevo
