#pragma once

#include <cstdint>

namespace nslab {

/// Counter-based generator: every draw is a pure function of (seed, counter).
///
/// Algorithm (reproducible in any language with 64-bit unsigned arithmetic):
///   mix(z):  z += 0x9E3779B97F4A7C15;
///            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
///            z = (z ^ (z >> 27)) * 0x94D049BB133111EB;
///            return z ^ (z >> 31);                 (SplitMix64 output step)
///   bits(seed, counter) = mix(mix(seed) + counter)
///   uniform(seed, counter) = ((bits >> 11) + 1) * 2^-53, in (0, 1]
///   normal(m) = sqrt(-2 ln u1) * cos(2π u2) with u1 = uniform(2m),
///            u2 = uniform(2m + 1)                 (Box-Muller, cosine branch)
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) noexcept;

  std::uint64_t bits(std::uint64_t counter) const noexcept;
  double uniform(std::uint64_t counter) const noexcept;

  /// Standard normal draw; consumes counters 2*index and 2*index+1.
  double normal(std::uint64_t index) const noexcept;

  static std::uint64_t mix(std::uint64_t z) noexcept;

 private:
  std::uint64_t key_;
};

}  // namespace nslab
