#pragma once

#include <cstdint>

namespace beliefplan {

/// Combine two seeds into one, splitmix64-style. Used to derive per-episode
/// and per-component seeds from a single master seed so that benchmark runs
/// are reproducible bit-for-bit.
inline std::uint64_t combine_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Small deterministic generator (splitmix64). We avoid std::*_distribution
/// on purpose: their output is implementation-defined, and traces must replay
/// identically across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1), 53 bits of randomness.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t bounded(std::uint64_t bound) {
    // Lemire's multiply-shift; bias is negligible for our bounds (< 2^32).
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
  }

 private:
  std::uint64_t state_;
};

}  // namespace beliefplan
