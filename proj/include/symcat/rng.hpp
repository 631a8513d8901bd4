#pragma once

#include <cstdint>

namespace symcat {

/// Counter-based generator: every draw is a pure function of
/// (seed, stream, counter), so sample i is the same no matter which worker
/// or in which order it is produced.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t bits(std::uint64_t counter) const;
  /// Uniform in [0, 1).
  double uniform(std::uint64_t counter) const;
  /// Standard normal (Box-Muller over counters 2c and 2c+1).
  double normal(std::uint64_t counter) const;

  CounterRng substream(std::uint64_t stream) const { return CounterRng(seed_, stream_ * 0x100000001b3ULL + stream + 1); }

  std::uint64_t next_bits() { return bits(counter_++); }
  double next_uniform() { return uniform(counter_++); }
  double next_normal() { return normal(counter_++); }
  /// Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) { return next_bits() % n; }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace symcat
