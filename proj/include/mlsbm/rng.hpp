#pragma once

#include <cstdint>

namespace mlsbm {

/// SplitMix64 generator. Small state, trivially seedable, and good enough
/// statistically for Monte Carlo sampling of Bernoulli edges.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound) via 128-bit multiply-shift.
  std::uint64_t next_below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

 private:
  std::uint64_t state_;
};

/// Derives a substream seed from a parent seed and an index by pushing both
/// through the SplitMix64 mixer. Chained calls give nested substreams, e.g.
/// mix(mix(base, grid_index), trial).
inline std::uint64_t mix(std::uint64_t seed, std::uint64_t index) {
  Rng r(seed + 0x9e3779b97f4a7c15ull * (index + 1));
  return r.next();
}

}  // namespace mlsbm
