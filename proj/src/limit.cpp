#include "ctrwlab/limit.hpp"

#include <cmath>
#include <stdexcept>

#include "ctrwlab/rng.hpp"

namespace ctrw {

std::string to_string(AKind k) {
  switch (k) {
    case AKind::brownian: return "brownian";
    case AKind::symmetric_stable: return "symmetric_stable";
    case AKind::drift: return "drift";
  }
  return "?";
}

std::string to_string(DKind k) {
  switch (k) {
    case DKind::one_sided_stable: return "one_sided_stable";
    case DKind::linear_drift: return "linear_drift";
  }
  return "?";
}

AKind parse_a_kind(const std::string& s) {
  for (auto k : {AKind::brownian, AKind::symmetric_stable, AKind::drift})
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown limit A kind '" + s + "'");
}

DKind parse_d_kind(const std::string& s) {
  for (auto k : {DKind::one_sided_stable, DKind::linear_drift})
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown limit D kind '" + s + "'");
}

void LimitModel::validate() const {
  if (dim == 0) throw std::invalid_argument("limit dimension must be positive");
  if (!(mesh > 0.0)) throw std::invalid_argument("grid mesh must be positive");
  if (!(horizon > 0.0)) throw std::invalid_argument("limit horizon must be positive");
  if (a_kind == AKind::symmetric_stable && !(alpha > 0.0 && alpha <= 2.0))
    throw std::invalid_argument("alpha must lie in (0, 2]");
  if (d_kind == DKind::one_sided_stable) {
    if (!(beta > 0.0 && beta < 1.0)) throw DomainError("subordinator index beta must lie in (0, 1)");
    if (!(d_scale > 0.0)) throw std::invalid_argument("subordinator scale must be positive");
  } else if (!(d_drift > 0.0)) {
    throw std::invalid_argument("subordinator drift must be positive");
  }
}

LimitPair sample_limit_pair(const LimitModel& model, std::uint64_t seed, std::uint64_t stream) {
  model.validate();
  Rng rng(seed, stream);
  const double dt = model.mesh;
  const std::size_t d = model.dim;
  const double d_step = std::pow(model.d_scale * dt, 1.0 / model.beta);
  const double a_step = model.a_kind == AKind::brownian ? std::sqrt(dt) : std::pow(dt, 1.0 / model.alpha);

  std::vector<double> times{0.0}, a_values(d, 0.0), d_values{0.0};
  Vec a(d, 0.0);
  double dv = 0.0;
  bool passed = false;
  for (std::size_t k = 1;; ++k) {
    if (k > model.max_cells) throw std::runtime_error("limit grid exceeded its cell cap before passing the horizon");
    const double t = static_cast<double>(k) * dt;
    for (std::size_t c = 0; c < d; ++c) {
      switch (model.a_kind) {
        case AKind::brownian: a[c] += model.a_scale * a_step * rng.normal(); break;
        case AKind::symmetric_stable: a[c] += model.a_scale * a_step * sample_symmetric_stable(rng, model.alpha); break;
        case AKind::drift: a[c] = model.a_drift * t; break;
      }
    }
    if (model.d_kind == DKind::one_sided_stable) {
      double inc = d_step * sample_one_sided_stable(rng, model.beta);
      while (!(inc > 0.0)) inc = d_step * sample_one_sided_stable(rng, model.beta);
      dv += inc;
    } else {
      dv = model.d_drift * t;
    }
    times.push_back(t);
    a_values.insert(a_values.end(), a.begin(), a.end());
    d_values.push_back(dv);
    if (passed) break;
    passed = dv > model.horizon;
  }
  const double grid_end = times.back();
  std::vector<Segment> modes(times.size(), Segment::hold);
  CadlagPath a_path(d, grid_end, times, std::move(a_values), modes);
  if (model.d_kind == DKind::linear_drift) {
    CadlagPath line(1, grid_end, {0.0}, {0.0}, {Segment::linear}, {grid_end}, {model.d_drift * grid_end});
    return {std::move(a_path), MonotonePath(std::move(line))};
  }
  CadlagPath d_path(1, grid_end, std::move(times), std::move(d_values), std::move(modes));
  return {std::move(a_path), MonotonePath(std::move(d_path))};
}

CadlagPath limit_ctrw(const CadlagPath& a, const MonotonePath& d, double horizon) {
  if (!(horizon >= 0.0 && horizon < d.top())) throw DomainError("horizon must lie below the subordinator's final value");
  return phi(a, d).restrict(horizon);
}

CadlagPath limit_cpctrw(const CadlagPath& a, const MonotonePath& d, double horizon) {
  if (!(horizon >= 0.0 && horizon < d.top())) throw DomainError("horizon must lie below the subordinator's final value");
  return stair_fill(phi(a, d)).restrict(horizon);
}

}  // namespace ctrw
