#pragma once

#include <cstdint>
#include <random>

namespace poolscreen {

using Rng = std::mt19937_64;

// SplitMix64 output function. mix_seed(s, i) is the value at position i of
// the SplitMix64 sequence started at s, so it serves as a stateless
// seed-derivation map: replication r of a run with seed s draws its design
// stream from mix_seed(mix_seed(s, r), 0) and its infection stream from
// mix_seed(mix_seed(s, r), 1), and axis point j of a sweep with base seed s
// runs with seed mix_seed(s, j). This derivation is part of the
// reproducibility contract and is stable across versions.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace poolscreen
