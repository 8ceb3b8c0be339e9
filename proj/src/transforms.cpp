#include "ctrwlab/transforms.hpp"

#include <algorithm>
#include <stdexcept>

namespace ctrw {

namespace {

bool same(std::span<const double> a, std::span<const double> b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

// ---------------------------------------------------------------------------
// MonotonePath

MonotonePath::MonotonePath(CadlagPath path) : path_(std::move(path)) {
  if (path_.dim() != 1) throw std::invalid_argument("monotone path must be scalar");
  if (path_.value(0)[0] < 0.0) throw DomainError("monotone path must start at a value >= 0");
  for (std::size_t i = 0; i < path_.size(); ++i) {
    if (i > 0 && path_.value(i)[0] < path_.segment_end_value(i - 1)[0])
      throw DomainError("path decreases at a knot");
    if (path_.mode(i) == Segment::linear && path_.anchor_value(i)[0] < path_.value(i)[0])
      throw DomainError("path decreases along a linear segment");
  }
}

// ---------------------------------------------------------------------------
// PiecewiseFunction

PiecewiseFunction::PiecewiseFunction(const CadlagPath& path) : dim_(path.dim()) {
  breaks_ = path.times();
  if (path.horizon() > breaks_.back()) breaks_.push_back(path.horizon());
  const std::size_t n = breaks_.size();
  point_.resize(n * dim_);
  left_.resize(n * dim_);
  right_.resize(n * dim_);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec v = path.eval(breaks_[i]);
    const Vec l = i == 0 ? v : path.left_limit(breaks_[i]);
    std::copy(v.begin(), v.end(), point_.begin() + i * dim_);
    std::copy(v.begin(), v.end(), right_.begin() + i * dim_);
    std::copy(l.begin(), l.end(), left_.begin() + i * dim_);
  }
}

void PiecewiseFunction::eval_into(double u, Side side, double* out) const {
  if (!(u >= 0.0 && u <= end())) throw DomainError("piecewise function evaluated outside its domain");
  auto it = std::lower_bound(breaks_.begin(), breaks_.end(), u);
  const auto k = static_cast<std::size_t>(it - breaks_.begin());
  if (it != breaks_.end() && *it == u) {
    const auto& src = side == Side::point ? point_ : side == Side::left ? left_ : right_;
    std::copy_n(src.begin() + k * dim_, dim_, out);
    return;
  }
  const std::size_t i = k - 1;
  const double frac = (u - breaks_[i]) / (breaks_[i + 1] - breaks_[i]);
  for (std::size_t c = 0; c < dim_; ++c) {
    const double a = right_[i * dim_ + c];
    const double b = left_[(i + 1) * dim_ + c];
    out[c] = a + (b - a) * frac;
  }
}

Vec PiecewiseFunction::eval(double u) const {
  Vec out(dim_);
  eval_into(u, Side::point, out.data());
  return out;
}

Vec PiecewiseFunction::eval_left(double u) const {
  Vec out(dim_);
  eval_into(u, Side::left, out.data());
  return out;
}

Vec PiecewiseFunction::eval_right(double u) const {
  Vec out(dim_);
  eval_into(u, Side::right, out.data());
  return out;
}

PiecewiseFunction PiecewiseFunction::left_version() const {
  PiecewiseFunction out = *this;
  std::copy(left_.begin() + dim_, left_.end(), out.point_.begin() + dim_);
  return out;
}

PiecewiseFunction PiecewiseFunction::right_version() const {
  PiecewiseFunction out = *this;
  const std::size_t n = breaks_.size();
  std::copy(right_.begin(), right_.begin() + (n - 1) * dim_, out.point_.begin());
  return out;
}

PiecewiseFunction PiecewiseFunction::compose(const PiecewiseFunction& outer, const PiecewiseFunction& inner) {
  if (inner.dim_ != 1) throw std::invalid_argument("inner function of a composition must be scalar");
  const std::size_t d = outer.dim_;
  const double lo = 0.0;
  const double hi = outer.end();
  auto check_range = [&](double g) {
    if (!(g >= lo && g <= hi)) throw DomainError("composition leaves the outer function's domain");
  };

  PiecewiseFunction out;
  out.dim_ = d;
  Vec buf(d);
  auto push_break = [&](double b) {
    out.breaks_.push_back(b);
    out.point_.resize(out.point_.size() + d);
    out.left_.resize(out.left_.size() + d);
    out.right_.resize(out.right_.size() + d);
  };
  auto slot = [&](std::vector<double>& v) { return v.data() + v.size() - d; };

  const std::size_t n = inner.breaks_.size();
  Vec pending_left(d);
  for (std::size_t i = 0; i < n; ++i) {
    const double b = inner.breaks_[i];
    const double gp = inner.point_[i];
    check_range(gp);
    push_break(b);
    outer.eval_into(gp, Side::point, slot(out.point_));
    if (i == 0) {
      std::copy_n(slot(out.point_), d, slot(out.left_));
    } else {
      std::copy(pending_left.begin(), pending_left.end(), slot(out.left_));
    }
    if (i + 1 == n) {
      std::copy_n(slot(out.point_), d, slot(out.right_));
      break;
    }

    const double b_next = inner.breaks_[i + 1];
    const double ga = inner.right_[i];
    const double gb = inner.left_[i + 1];
    check_range(ga);
    check_range(gb);
    if (gb < ga) throw DomainError("inner function of a composition must be nondecreasing");
    if (ga == gb) {
      outer.eval_into(ga, Side::point, slot(out.right_));
      std::copy_n(slot(out.right_), d, pending_left.begin());
      continue;
    }
    outer.eval_into(ga, Side::right, slot(out.right_));
    auto first = std::upper_bound(outer.breaks_.begin(), outer.breaks_.end(), ga);
    auto last = std::lower_bound(outer.breaks_.begin(), outer.breaks_.end(), gb);
    for (auto it = first; it != last; ++it) {
      const double beta = *it;
      const double t = b + (beta - ga) / (gb - ga) * (b_next - b);
      if (!(t > out.breaks_.back() && t < b_next)) continue;  // lost to rounding
      const auto k = static_cast<std::size_t>(it - outer.breaks_.begin());
      push_break(t);
      std::copy_n(outer.point_.begin() + k * d, d, slot(out.point_));
      std::copy_n(outer.left_.begin() + k * d, d, slot(out.left_));
      std::copy_n(outer.right_.begin() + k * d, d, slot(out.right_));
    }
    outer.eval_into(gb, Side::left, pending_left.data());
  }
  return out;
}

CadlagPath PiecewiseFunction::to_cadlag() const {
  const std::size_t n = breaks_.size();
  auto at = [&](const std::vector<double>& v, std::size_t i) {
    return std::span<const double>(v.data() + i * dim_, dim_);
  };
  std::vector<double> times, values, anchor_times, anchor_values;
  std::vector<Segment> modes;
  auto close_previous = [&](std::size_t next) {
    // Finish the segment that starts at the last emitted knot and ends at break `next`.
    const std::size_t k = modes.size() - 1;
    auto start = std::span<const double>(values.data() + k * dim_, dim_);
    if (same(start, at(left_, next))) return;
    modes[k] = Segment::linear;
    anchor_times[k] = breaks_[next];
    std::copy_n(at(left_, next).begin(), dim_, anchor_values.begin() + k * dim_);
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (i + 1 < n && !same(at(point_, i), at(right_, i)))
      throw std::logic_error("to_cadlag needs a right-continuous function");
    if (i > 0) {
      const bool last = i + 1 == n;
      const bool continuous = same(at(point_, i), at(left_, i));
      const auto k = modes.size() - 1;
      const bool prev_flat = same(std::span<const double>(values.data() + k * dim_, dim_), at(left_, i));
      const bool next_flat = last || same(at(right_, i), at(left_, i + 1));
      close_previous(i);
      // Drop breakpoints where nothing happens.
      if (continuous && (last || (prev_flat && next_flat && modes[k] == Segment::hold))) continue;
    }
    times.push_back(breaks_[i]);
    values.insert(values.end(), at(point_, i).begin(), at(point_, i).end());
    modes.push_back(Segment::hold);
    anchor_times.push_back(0.0);
    anchor_values.insert(anchor_values.end(), dim_, 0.0);
  }
  return CadlagPath(dim_, breaks_.back(), std::move(times), std::move(values), std::move(modes),
                    std::move(anchor_times), std::move(anchor_values));
}

// ---------------------------------------------------------------------------
// f, inverses, Phi

CadlagPath stair_fill(const CadlagPath& x) {
  const std::size_t d = x.dim();
  std::vector<double> times, values, anchor_times, anchor_values;
  std::vector<Segment> modes;
  auto emit = [&](std::size_t i, Segment mode, double at, std::span<const double> av) {
    times.push_back(x.time(i));
    values.insert(values.end(), x.value(i).begin(), x.value(i).end());
    modes.push_back(mode);
    anchor_times.push_back(at);
    anchor_values.insert(anchor_values.end(), av.begin(), av.end());
  };
  const std::size_t k = x.size();
  std::size_t i = 0;
  while (i < k) {
    if (!x.segment_constant(i)) {
      emit(i, Segment::linear, x.anchor_time(i), x.anchor_value(i));
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < k && x.segment_constant(j + 1) && same(x.value(j + 1), x.value(i))) ++j;
    if (j + 1 < k && !same(x.value(j + 1), x.value(i))) {
      emit(i, Segment::linear, x.time(j + 1), x.value(j + 1));
    } else {
      for (std::size_t m = i; m <= j; ++m) emit(m, Segment::hold, 0.0, x.value(m));
    }
    i = j + 1;
  }
  return CadlagPath(d, x.horizon(), std::move(times), std::move(values), std::move(modes),
                    std::move(anchor_times), std::move(anchor_values));
}

Vec stair_fill_at(const CadlagPath& x, double t) {
  const double lo = eta(x, t);
  const double hi = theta(x, t);
  if (hi == kInfinity || hi == lo) return x.eval(t);
  const Vec a = x.eval(lo);
  const Vec b = x.eval(hi);
  Vec out(x.dim());
  for (std::size_t c = 0; c < out.size(); ++c) out[c] = a[c] + (b[c] - a[c]) / (hi - lo) * (t - lo);
  return out;
}

MonotonePath right_inverse(const MonotonePath& ym) {
  const CadlagPath& y = ym.path();
  // Completed graph of y as (s, u) vertices; u is nondecreasing along it.
  std::vector<std::pair<double, double>> vertices;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y.jumps_at(i)) vertices.emplace_back(y.time(i), y.segment_end_value(i - 1)[0]);
    vertices.emplace_back(y.time(i), y.value(i)[0]);
  }
  if (y.horizon() > y.time(y.size() - 1))
    vertices.emplace_back(y.horizon(), y.segment_end_value(y.size() - 1)[0]);

  struct Level {
    double u, s_first, s_last;
  };
  std::vector<Level> levels;
  for (auto [s, u] : vertices) {
    if (!levels.empty() && levels.back().u == u) {
      levels.back().s_last = s;
    } else {
      levels.push_back({u, s, s});
    }
  }

  std::vector<double> times, values, anchor_times, anchor_values;
  std::vector<Segment> modes;
  auto emit = [&](double t, double v) {
    times.push_back(t);
    values.push_back(v);
    modes.push_back(Segment::hold);
    anchor_times.push_back(0.0);
    anchor_values.push_back(0.0);
  };
  if (levels.front().u > 0.0) emit(0.0, 0.0);
  for (std::size_t k = 0; k < levels.size(); ++k) {
    emit(levels[k].u, levels[k].s_last);
    if (k + 1 < levels.size() && levels[k + 1].s_first != levels[k].s_last) {
      modes.back() = Segment::linear;
      anchor_times.back() = levels[k + 1].u;
      anchor_values.back() = levels[k + 1].s_first;
    }
  }
  return MonotonePath(CadlagPath(1, levels.back().u, std::move(times), std::move(values), std::move(modes),
                                 std::move(anchor_times), std::move(anchor_values)));
}

PiecewiseFunction left_limit_path(const CadlagPath& x) { return PiecewiseFunction(x).left_version(); }
PiecewiseFunction right_limit_path(const CadlagPath& x) { return PiecewiseFunction(x).right_version(); }
PiecewiseFunction left_limit_path(const PiecewiseFunction& x) { return x.left_version(); }
PiecewiseFunction right_limit_path(const PiecewiseFunction& x) { return x.right_version(); }

CadlagPath compose(const CadlagPath& x, const MonotonePath& y) {
  return PiecewiseFunction::compose(PiecewiseFunction(x), PiecewiseFunction(y.path())).to_cadlag();
}

CadlagPath phi(const CadlagPath& x, const MonotonePath& y) {
  if (x.horizon() < y.horizon()) throw DomainError("phi needs x defined on y's whole horizon");
  const MonotonePath inverse = right_inverse(y);
  const PiecewiseFunction outer = left_limit_path(x);
  const PiecewiseFunction inner = left_limit_path(inverse.path());
  return right_limit_path(PiecewiseFunction::compose(outer, inner)).to_cadlag();
}

MonotonePath inverse_of_composed(const MonotonePath& y) {
  const MonotonePath inverse = right_inverse(y);
  return right_inverse(MonotonePath(compose(y.path(), inverse)));
}

}  // namespace ctrw
