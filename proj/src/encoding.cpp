#include "qevo/encoding.hpp"

#include <stdexcept>
#include <string>

namespace qevo {

void GenomeLayout::validate() const {
  if (dimension < 1) {
    throw std::invalid_argument("GenomeLayout: dimension must be positive");
  }
  if (bits_per_variable < 1 || bits_per_variable > 32) {
    throw std::invalid_argument(
        "GenomeLayout: bits_per_variable must be in [1, 32]");
  }
  if (lower_bounds.size() != static_cast<std::size_t>(dimension) ||
      upper_bounds.size() != static_cast<std::size_t>(dimension)) {
    throw std::invalid_argument(
        "GenomeLayout: bounds must have one entry per variable");
  }
  for (int i = 0; i < dimension; ++i) {
    if (!(lower_bounds[i] < upper_bounds[i])) {
      throw std::invalid_argument("GenomeLayout: lower_bounds[" +
                                  std::to_string(i) + "] must be < upper_bounds[" +
                                  std::to_string(i) + "]");
    }
  }
}

GenomeLayout GenomeLayout::uniform(int dimension, double lower, double upper,
                                   int bits_per_variable) {
  GenomeLayout layout;
  layout.dimension = dimension;
  layout.bits_per_variable = bits_per_variable;
  layout.lower_bounds.assign(static_cast<std::size_t>(dimension), lower);
  layout.upper_bounds.assign(static_cast<std::size_t>(dimension), upper);
  layout.validate();
  return layout;
}

namespace {

void require_matching_length(const BitString& genome, const GenomeLayout& layout) {
  if (genome.size() != static_cast<std::size_t>(layout.total_bits())) {
    throw std::invalid_argument(
        "decode: genome has " + std::to_string(genome.size()) +
        " bits, layout expects " + std::to_string(layout.total_bits()));
  }
}

}  // namespace

std::uint64_t variable_code(const BitString& genome, const GenomeLayout& layout,
                            int variable) {
  require_matching_length(genome, layout);
  const int offset = variable * layout.bits_per_variable;
  std::uint64_t code = 0;
  for (int k = 0; k < layout.bits_per_variable; ++k) {
    code = (code << 1) | genome.bits[static_cast<std::size_t>(offset + k)];
  }
  return code;
}

void decode_into(const BitString& genome, const GenomeLayout& layout,
                 std::span<double> out) {
  require_matching_length(genome, layout);
  if (out.size() != static_cast<std::size_t>(layout.dimension)) {
    throw std::invalid_argument("decode: output span has wrong length");
  }
  const int bits = layout.bits_per_variable;
  const double denom = static_cast<double>((std::uint64_t{1} << bits) - 1);
  const std::uint8_t* bit = genome.bits.data();
  for (int i = 0; i < layout.dimension; ++i) {
    std::uint64_t code = 0;
    for (int k = 0; k < bits; ++k) {
      code = (code << 1) | *bit++;
    }
    const double t = static_cast<double>(code) / denom;
    out[static_cast<std::size_t>(i)] =
        layout.lower_bounds[static_cast<std::size_t>(i)] +
        (layout.upper_bounds[static_cast<std::size_t>(i)] -
         layout.lower_bounds[static_cast<std::size_t>(i)]) *
            t;
  }
}

std::vector<double> decode(const BitString& genome, const GenomeLayout& layout) {
  std::vector<double> x(static_cast<std::size_t>(layout.dimension));
  decode_into(genome, layout, x);
  return x;
}

BitString random_bitstring(const GenomeLayout& layout, RandomStream& rng) {
  BitString genome(static_cast<std::size_t>(layout.total_bits()));
  for (auto& bit : genome.bits) {
    bit = rng.next_bit();
  }
  return genome;
}

}  // namespace qevo
