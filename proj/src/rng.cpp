#include "nslab/rng.hpp"

#include <cmath>
#include <numbers>

namespace nslab {

CounterRng::CounterRng(std::uint64_t seed) noexcept : key_(mix(seed)) {}

std::uint64_t CounterRng::mix(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t CounterRng::bits(std::uint64_t counter) const noexcept {
  return mix(key_ + counter);
}

double CounterRng::uniform(std::uint64_t counter) const noexcept {
  return static_cast<double>((bits(counter) >> 11) + 1) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t index) const noexcept {
  // Box-Muller; the cosine branch only, so each index is independent.
  const double u1 = uniform(2 * index);
  const double u2 = uniform(2 * index + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace nslab
