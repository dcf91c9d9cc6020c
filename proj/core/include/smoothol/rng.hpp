#pragma once

#include <cstdint>
#include <limits>

namespace smoothol {

/// Portable xoshiro256** generator seeded through splitmix64.
///
/// All distributions below are implemented here rather than taken from
/// <random>, whose distribution algorithms are implementation-defined; a
/// given (seed, stream) therefore yields the same draws on every platform.
/// Constants follow Blackman & Vigna's reference implementation.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0);

  /// Independent child stream. Children of the same parent with distinct
  /// ids are decorrelated; splitting does not advance the parent.
  Rng split(std::uint64_t stream_id) const;

  std::uint64_t next_u64();
  std::uint64_t operator()() { return next_u64(); }
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return std::numeric_limits<std::uint64_t>::max(); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform();
  /// Uniform integer on [0, n), unbiased (Lemire's method). n must be > 0.
  std::uint64_t uniform_int(std::uint64_t n);
  /// Standard normal via Box-Muller; consumes exactly two uniforms.
  double normal();
  /// -1 or +1 with probability 1/2 each.
  int rademacher();
  bool bernoulli(double p);

 private:
  std::uint64_t s_[4];
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace smoothol
