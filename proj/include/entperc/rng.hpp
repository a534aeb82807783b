#pragma once

#include <cstdint>

namespace entperc {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Counter-based random stream for one Monte Carlo trial. The n-th draw of
/// trial t under master seed s is a pure function of (s, t, n), so trials
/// can run in any order on any number of workers with identical results.
class TrialStream {
 public:
  TrialStream(std::uint64_t seed, std::uint64_t trial) noexcept
      : key_(mix64(seed ^ mix64(trial + 0x632BE59BD9B4E019ULL))) {}

  std::uint64_t next() noexcept {
    counter_ += kGamma;
    return mix64(key_ + counter_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Always consumes exactly one draw. For fixed (seed, trial) the result
  /// is monotone in p, which couples runs at different densities.
  bool bernoulli(double p) noexcept { return uniform() < p; }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace entperc
