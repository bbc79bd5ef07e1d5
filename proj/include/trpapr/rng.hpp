#pragma once

#include <cstdint>
#include <random>

namespace trpapr {

/// Seedable, splittable random stream.
///
/// Every experiment derives one sub-stream per symbol (or per GA run) with
/// split(), so results never depend on how work is scheduled on threads.
class Rng {
 public:
  using engine_type = std::mt19937_64;
  using result_type = engine_type::result_type;

  explicit Rng(std::uint64_t seed);

  /// Independent child stream keyed by `stream`. Does not advance *this.
  Rng split(std::uint64_t stream) const;

  std::uint64_t seed() const { return seed_; }

  result_type operator()() { return engine_(); }
  static constexpr result_type min() { return engine_type::min(); }
  static constexpr result_type max() { return engine_type::max(); }

  /// Uniform integer in [lo, hi].
  std::size_t uniform_index(std::size_t lo, std::size_t hi);
  /// Uniform real in [0, 1).
  double uniform01();
  bool bernoulli(double p);

 private:
  std::uint64_t seed_;
  engine_type engine_;
};

/// SplitMix64 finalizer; used to decorrelate seeds.
std::uint64_t mix64(std::uint64_t x);

}  // namespace trpapr
