#include "cvqec/random.hpp"

#include <cmath>
#include <numbers>

namespace cvqec {

namespace {

// SplitMix64 finalizer (Steele, Lea, Flood 2014).
std::uint64_t split_mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

RandomStream RandomStream::derived(std::uint64_t seed, std::uint64_t block,
                                   std::uint64_t index) {
  std::uint64_t h = split_mix64(seed);
  h = split_mix64(h ^ split_mix64(block + 0x632BE59BD9B4E019ULL));
  h = split_mix64(h ^ split_mix64(index + 0x9E6C63D0876A9A47ULL));
  return RandomStream(h);
}

double RandomStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::normal() {
  // Box-Muller, cosine branch only; u1 mapped to (0, 1] so log is finite.
  double u1 = static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t RandomStream::pick(const std::vector<double>& weights) {
  double u = uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) return i;
  }
  return weights.size() - 1;
}

}  // namespace cvqec
