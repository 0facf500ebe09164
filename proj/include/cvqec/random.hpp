#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace cvqec {

/// Seeded random stream with a fixed, portable algorithm.
///
/// The engine is std::mt19937_64 (bit-exact across platforms by the
/// standard); uniform and normal variates are produced by explicit
/// conversions implemented here, so a given seed yields the same sample
/// sequence everywhere. Normal draws use Box-Muller and consume exactly
/// two engine outputs per call.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream derived from (seed, block, index), e.g. one per
  /// Monte Carlo run. Derivation is a SplitMix64 hash chain, so streams
  /// for distinct (block, index) pairs are uncorrelated and parallel
  /// workers never share state.
  static RandomStream derived(std::uint64_t seed, std::uint64_t block,
                              std::uint64_t index);

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform();

  /// Standard normal deviate.
  double normal();

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  /// Index drawn from a discrete distribution given by `weights`
  /// (nonnegative, summing to ~1). Falls back to the last index if
  /// rounding leaves the cumulative sum short.
  std::size_t pick(const std::vector<double>& weights);

 private:
  std::mt19937_64 engine_;
};

}  // namespace cvqec
