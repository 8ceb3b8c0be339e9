#pragma once

#include <cstdint>

namespace ctrw {

/// Counter-based generator: draw k of stream (seed, stream) is
/// splitmix64_mix(key + (k + 1) * golden), key = mix(seed ^ mix(stream + golden)).
/// Any (seed, stream, k) can be recomputed without the draws before it, so
/// replicates are reproducible regardless of how work is split across threads.
class Rng {
 public:
  static constexpr const char* kId = "splitmix64-counter/v1";

  Rng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1).
  double uniform();
  /// Uniform on (a, b).
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  /// Standard normal (Box-Muller; the second variate is cached).
  double normal();
  /// Exp(1).
  double exponential();

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64_mix(std::uint64_t z);

/// P(J > x) = x^{-beta} for x >= 1.
double sample_pareto(Rng& rng, double beta);

/// Symmetric alpha-stable with E exp(i u X) = exp(-|u|^alpha) (Chambers-Mallows-Stuck).
double sample_symmetric_stable(Rng& rng, double alpha);

/// Positive beta-stable, 0 < beta < 1, with E exp(-s S) = exp(-s^beta) (Kanter).
double sample_one_sided_stable(Rng& rng, double beta);

}  // namespace ctrw
