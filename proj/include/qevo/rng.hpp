#pragma once

#include <array>
#include <cstdint>

namespace qevo {

// SplitMix64 finalizer (Steele, Lea & Flood). Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Splittable counter-style key derivation: hashes (base, w0, w1, ...) into a
// fresh stream seed. Every random decision in a run is drawn from a stream
// keyed this way, so results do not depend on scheduling or worker count,
// and extending a batch never perturbs streams that already exist.
template <class... Words>
constexpr std::uint64_t derive_seed(std::uint64_t base, Words... words) noexcept {
  std::uint64_t h = mix64(base + 0x9e3779b97f4a7c15ULL);
  ((h = mix64((h ^ static_cast<std::uint64_t>(words)) + 0x9e3779b97f4a7c15ULL)), ...);
  return h;
}

// Tags separating the substream families of a trial. The values are part of
// the reproducibility contract: changing one changes every seeded result.
enum class StreamKind : std::uint64_t {
  Trial = 1,
  Measurement = 2,
  GaInit = 3,
  GaSelection = 4,
  GaCrossover = 5,
  GaMutation = 6,
  PopulationSweep = 7,
  DimensionSweep = 8,
  Batch = 9,
};

constexpr std::uint64_t stream_tag(StreamKind kind) noexcept {
  return static_cast<std::uint64_t>(kind);
}

// xoshiro256++ (Blackman & Vigna, public domain reference implementation),
// seeded through SplitMix64. Chosen over std::mt19937 because the raw output
// and the derived uniform doubles are identical on every platform, which the
// bit-reproducibility guarantees rely on.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) noexcept {
    for (auto& word : state_) {
      seed += 0x9e3779b97f4a7c15ULL;
      word = mix64(seed);
    }
  }

  std::uint64_t next_u64() noexcept {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1) with 53 random bits.
  double next_double() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // One fair bit.
  std::uint8_t next_bit() noexcept {
    return static_cast<std::uint8_t>(next_u64() >> 63);
  }

  // Unbiased uniform integer in [0, bound). Lemire's multiply-shift method
  // with the rejection step, so no modulo bias.
  std::uint64_t next_below(std::uint64_t bound) noexcept {
    unsigned __int128 product =
        static_cast<unsigned __int128>(next_u64()) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        product = static_cast<unsigned __int128>(next_u64()) * bound;
        low = static_cast<std::uint64_t>(product);
      }
    }
    return static_cast<std::uint64_t>(product >> 64);
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
};

}  // namespace qevo
