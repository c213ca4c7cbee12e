#pragma once

#include <cstdint>

namespace netgame {

inline constexpr std::uint64_t kSplitMix64Gamma = 0x9E3779B97F4A7C15ULL;

// splitmix64 generator (Steele, Lea & Flood's SplittableRandom finalizer).
// This exact stream is a compatibility contract: scenario generation and seed
// mixing must be bit-identical across builds and platforms, so experiment
// outputs stay byte-reproducible.  Do not swap in std::mt19937 or change the
// unit-interval mapping.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    state_ += kSplitMix64Gamma;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1): the top 53 bits of next() divided by 2^53.
  constexpr double next_unit() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

// Derives a decorrelated per-cell seed from a base seed and two coordinates
// (channel count n, replicate index s) without a seed table.
inline constexpr std::uint64_t mix_seed(std::uint64_t base, std::uint64_t n,
                                        std::uint64_t s) noexcept {
  return SplitMix64(base ^ (n * kSplitMix64Gamma) ^ s).next();
}

// Identifier for the stream contract above, reported by the CLI version flag.
inline constexpr const char* kPrngContractId = "splitmix64-unit53";

}  // namespace netgame
