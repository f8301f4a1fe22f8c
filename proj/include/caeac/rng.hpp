#pragma once
// Deterministic, platform-independent randomness helpers for the benchmark
// harness. std::shuffle / std::uniform_int_distribution / normal_distribution
// are implementation-defined across standard libraries, so reports built with
// them would not be byte-reproducible; every draw here is pinned to exact
// integer/floating recipes instead:
//   - per-trial seeds: SplitMix64 stream over the base seed
//   - uniform engine: std::mt19937_64 (bit-exact by the standard)
//   - bounded draws: Lemire multiply-shift reduction
//   - shuffling: Fisher-Yates
//   - gaussians: Box-Muller over 53-bit uniforms

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace caeac {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// The (trial+1)-th output of the SplitMix64 stream seeded with base_seed.
inline std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t trial) {
  std::uint64_t state = base_seed;
  std::uint64_t out = 0;
  for (std::uint64_t i = 0; i <= trial; ++i) out = splitmix64_next(state);
  return out;
}

// Uniform draw in [0, bound) via multiply-shift.
inline std::uint64_t bounded_uint64(std::mt19937_64& eng, std::uint64_t bound) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(eng()) * bound) >> 64);
}

// In-place Fisher-Yates shuffle.
template <typename T>
void fisher_yates(std::vector<T>& values, std::mt19937_64& eng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(bounded_uint64(eng, i));
    std::swap(values[i - 1], values[j]);
  }
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_double(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// Standard normal via Box-Muller (uses two uniforms per call, cosine branch).
double standard_normal(std::mt19937_64& eng);

// Identifier of this pipeline, echoed in reports.
inline constexpr const char* kPrngDescription =
    "splitmix64-trial-seed+mt19937_64+lemire-fisher-yates";

}  // namespace caeac
