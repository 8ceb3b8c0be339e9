#pragma once

#include <cstdint>
#include <string>

#include "ctrwlab/path.hpp"
#include "ctrwlab/transforms.hpp"

namespace ctrw {

/// brownian: A(t) = a_scale B(t). symmetric_stable: increments a_scale
/// dt^{1/alpha} X. drift: A(t) = a_drift t, deterministic.
enum class AKind { brownian, symmetric_stable, drift };
/// one_sided_stable: E exp(-s D(t)) = exp(-t d_scale s^beta), on the grid.
/// linear_drift: D(t) = d_drift t as a single linear segment.
enum class DKind { one_sided_stable, linear_drift };

std::string to_string(AKind k);
std::string to_string(DKind k);
AKind parse_a_kind(const std::string& s);
DKind parse_d_kind(const std::string& s);

struct LimitModel {
  std::size_t dim = 1;
  AKind a_kind = AKind::brownian;
  double alpha = 2.0;
  double a_scale = 1.0;
  double a_drift = 1.0;
  DKind d_kind = DKind::one_sided_stable;
  double beta = 0.7;
  double d_scale = 1.0;
  double d_drift = 1.0;
  double mesh = 1e-3;
  /// Time horizon of R; the grid is extended until D passes it.
  double horizon = 1.0;
  std::size_t max_cells = 50'000'000;

  void validate() const;
};

struct LimitPair {
  CadlagPath a;
  MonotonePath d;
};

/// A and D on the grid k * mesh as hold paths (D linear in linear_drift
/// mode). The grid runs one cell past the first D value above the horizon,
/// so the gap of D that covers the horizon is complete.
LimitPair sample_limit_pair(const LimitModel& model, std::uint64_t seed, std::uint64_t stream = 0);

/// R = Phi(A, D) on [0, horizon]; horizon must lie below D's final value.
CadlagPath limit_ctrw(const CadlagPath& a, const MonotonePath& d, double horizon);

/// f(R) on [0, horizon], with f applied before truncation.
CadlagPath limit_cpctrw(const CadlagPath& a, const MonotonePath& d, double horizon);

}  // namespace ctrw
