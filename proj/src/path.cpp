#include "ctrwlab/path.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ctrw {

namespace {

bool same(std::span<const double> a, std::span<const double> b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

std::string at_time(const char* what, double t) {
  std::ostringstream os;
  os.precision(17);
  os << what << " (t = " << t << ")";
  return os.str();
}

}  // namespace

double sup_norm(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

double sup_distance(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

CadlagPath::CadlagPath(std::size_t dim, double horizon, const std::vector<Knot>& knots)
    : dim_(dim), horizon_(horizon) {
  if (dim == 0) throw std::invalid_argument("path dimension must be positive");
  times_.reserve(knots.size());
  values_.reserve(knots.size() * dim);
  modes_.reserve(knots.size());
  anchor_times_.assign(knots.size(), 0.0);
  anchor_values_.assign(knots.size() * dim, 0.0);
  for (std::size_t i = 0; i < knots.size(); ++i) {
    const Knot& k = knots[i];
    if (k.value.size() != dim) throw std::invalid_argument("knot value has wrong dimension");
    times_.push_back(k.time);
    values_.insert(values_.end(), k.value.begin(), k.value.end());
    modes_.push_back(k.mode);
    if (k.mode != Segment::linear) continue;
    if (k.anchor_time) {
      if (k.anchor_value.size() != dim) throw std::invalid_argument("anchor value has wrong dimension");
      anchor_times_[i] = *k.anchor_time;
      std::copy(k.anchor_value.begin(), k.anchor_value.end(), anchor_values_.begin() + i * dim);
    } else if (i + 1 < knots.size()) {
      anchor_times_[i] = knots[i + 1].time;
      if (knots[i + 1].value.size() != dim) throw std::invalid_argument("knot value has wrong dimension");
      std::copy(knots[i + 1].value.begin(), knots[i + 1].value.end(), anchor_values_.begin() + i * dim);
    } else if (k.time < horizon) {
      throw std::invalid_argument("final linear knot needs an explicit anchor");
    } else {
      anchor_times_[i] = k.time;
      std::copy(k.value.begin(), k.value.end(), anchor_values_.begin() + i * dim);
    }
  }
  validate_and_normalize();
}

CadlagPath::CadlagPath(std::size_t dim, double horizon, std::vector<double> times,
                       std::vector<double> values, std::vector<Segment> modes,
                       std::vector<double> anchor_times, std::vector<double> anchor_values)
    : dim_(dim),
      horizon_(horizon),
      times_(std::move(times)),
      values_(std::move(values)),
      modes_(std::move(modes)),
      anchor_times_(std::move(anchor_times)),
      anchor_values_(std::move(anchor_values)) {
  if (dim == 0) throw std::invalid_argument("path dimension must be positive");
  const std::size_t k = times_.size();
  if (values_.size() != k * dim || modes_.size() != k)
    throw std::invalid_argument("inconsistent knot array sizes");
  if (anchor_times_.empty()) anchor_times_.assign(k, 0.0);
  if (anchor_values_.empty()) anchor_values_.assign(k * dim, 0.0);
  if (anchor_times_.size() != k || anchor_values_.size() != k * dim)
    throw std::invalid_argument("inconsistent anchor array sizes");
  for (std::size_t i = 0; i < k; ++i) {
    if (modes_[i] != Segment::linear || anchor_times_[i] > times_[i]) continue;
    // No usable anchor supplied: default to the next knot.
    if (i + 1 < k) {
      anchor_times_[i] = times_[i + 1];
      std::copy_n(values_.begin() + (i + 1) * dim, dim, anchor_values_.begin() + i * dim);
    } else if (times_[i] < horizon_) {
      throw std::invalid_argument("final linear knot needs an explicit anchor");
    }
  }
  validate_and_normalize();
}

CadlagPath CadlagPath::step(double horizon, const std::vector<std::pair<double, double>>& knots) {
  std::vector<double> t, v;
  for (auto [a, b] : knots) {
    t.push_back(a);
    v.push_back(b);
  }
  std::vector<Segment> m(t.size(), Segment::hold);
  return CadlagPath(1, horizon, std::move(t), std::move(v), std::move(m));
}

void CadlagPath::validate_and_normalize() {
  if (!std::isfinite(horizon_) || horizon_ < 0.0) throw std::invalid_argument("horizon must be finite and >= 0");
  if (times_.empty()) throw std::invalid_argument("path needs at least one knot");
  if (times_.front() != 0.0) throw std::invalid_argument("first knot must be at time 0");
  for (std::size_t i = 1; i < times_.size(); ++i)
    if (!(times_[i] > times_[i - 1])) throw std::invalid_argument(at_time("knot times must be strictly increasing", times_[i]));
  if (times_.back() > horizon_) throw std::invalid_argument("last knot lies beyond the horizon");
  for (double v : values_)
    if (!std::isfinite(v)) throw std::invalid_argument("knot values must be finite");
  for (std::size_t i = 0; i < times_.size(); ++i) {
    double* av = anchor_values_.data() + i * dim_;
    const double* v = values_.data() + i * dim_;
    if (modes_[i] == Segment::linear) {
      const double end = segment_end(i);
      if (end == times_[i]) {
        modes_[i] = Segment::hold;  // degenerate segment at the horizon
      } else {
        if (!(anchor_times_[i] >= end) || !std::isfinite(anchor_times_[i]))
          throw std::invalid_argument(at_time("linear anchor must not precede the segment end", times_[i]));
        for (std::size_t c = 0; c < dim_; ++c)
          if (!std::isfinite(av[c])) throw std::invalid_argument("anchor values must be finite");
        if (std::equal(v, v + dim_, av)) modes_[i] = Segment::hold;  // flat ramp
      }
    }
    if (modes_[i] == Segment::hold) {
      anchor_times_[i] = segment_end(i);
      std::copy(v, v + dim_, av);
    }
  }
}

void CadlagPath::segment_value_into(std::size_t i, double t, double* out) const {
  const double* v = values_.data() + i * dim_;
  if (modes_[i] == Segment::hold) {
    std::copy(v, v + dim_, out);
    return;
  }
  const double* av = anchor_values_.data() + i * dim_;
  const double at = anchor_times_[i];
  if (t == at) {
    std::copy(av, av + dim_, out);
    return;
  }
  const double frac = (t - times_[i]) / (at - times_[i]);
  for (std::size_t c = 0; c < dim_; ++c) out[c] = v[c] + (av[c] - v[c]) * frac;
}

double CadlagPath::segment_value1(std::size_t i, double t) const {
  double out;
  if (dim_ == 1) {
    segment_value_into(i, t, &out);
    return out;
  }
  throw std::invalid_argument("scalar accessor used on a vector path");
}

std::size_t CadlagPath::segment_index(double t) const {
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  return static_cast<std::size_t>(it - times_.begin()) - 1;
}

Vec CadlagPath::eval(double t) const {
  if (!(t >= 0.0 && t <= horizon_)) throw DomainError(at_time("eval outside [0, horizon]", t));
  Vec out(dim_);
  segment_value_into(segment_index(t), t, out.data());
  return out;
}

double CadlagPath::eval1(double t) const {
  if (!(t >= 0.0 && t <= horizon_)) throw DomainError(at_time("eval outside [0, horizon]", t));
  return segment_value1(segment_index(t), t);
}

Vec CadlagPath::left_limit(double t) const {
  if (!(t > 0.0 && t <= horizon_)) throw DomainError(at_time("left limit outside (0, horizon]", t));
  auto it = std::lower_bound(times_.begin(), times_.end(), t);
  Vec out(dim_);
  segment_value_into(static_cast<std::size_t>(it - times_.begin()) - 1, t, out.data());
  return out;
}

double CadlagPath::left_limit1(double t) const {
  if (!(t > 0.0 && t <= horizon_)) throw DomainError(at_time("left limit outside (0, horizon]", t));
  auto it = std::lower_bound(times_.begin(), times_.end(), t);
  return segment_value1(static_cast<std::size_t>(it - times_.begin()) - 1, t);
}

Vec CadlagPath::segment_end_value(std::size_t i) const {
  Vec out(dim_);
  segment_value_into(i, segment_end(i), out.data());
  return out;
}

bool CadlagPath::jumps_at(std::size_t i) const {
  if (i == 0 || i >= times_.size()) return false;
  if (modes_[i - 1] == Segment::hold) return !same(value(i - 1), value(i));
  return !same(segment_end_value(i - 1), value(i));
}

std::vector<JumpRecord> CadlagPath::discontinuities() const {
  std::vector<JumpRecord> out;
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!jumps_at(i)) continue;
    JumpRecord j;
    j.time = times_[i];
    j.left_value = segment_end_value(i - 1);
    j.right_value.assign(value(i).begin(), value(i).end());
    j.magnitude = sup_distance(j.left_value, j.right_value);
    out.push_back(std::move(j));
  }
  return out;
}

bool CadlagPath::is_discontinuity(double t) const {
  auto it = std::lower_bound(times_.begin(), times_.end(), t);
  if (it == times_.end() || *it != t) return false;
  return jumps_at(static_cast<std::size_t>(it - times_.begin()));
}

std::vector<JumpRecord> CadlagPath::large_jumps(double eps, double until) const {
  if (!(eps > 0.0)) throw DomainError("large_jumps needs eps > 0");
  if (!(until >= 0.0 && until <= horizon_)) throw DomainError(at_time("large_jumps bound outside [0, horizon]", until));
  std::vector<JumpRecord> out;
  for (auto& j : discontinuities())
    if (j.time <= until && j.magnitude >= eps) out.push_back(std::move(j));
  return out;
}

bool CadlagPath::is_constant_on(double a, double b) const {
  if (!(a < b)) throw DomainError("is_constant_on needs a < b");
  if (!(a >= 0.0 && b <= horizon_)) throw DomainError("is_constant_on interval outside [0, horizon]");
  const std::size_t first = segment_index(a);
  const auto last = static_cast<std::size_t>(std::lower_bound(times_.begin(), times_.end(), b) - times_.begin()) - 1;
  for (std::size_t i = first; i <= last; ++i) {
    if (modes_[i] != Segment::hold) return false;
    if (i > first && !same(value(i), value(first))) return false;
  }
  return true;
}

CadlagPath CadlagPath::restrict(double new_horizon) const {
  if (!(new_horizon >= 0.0 && new_horizon <= horizon_)) throw DomainError(at_time("restrict beyond the horizon", new_horizon));
  const std::size_t k = segment_index(new_horizon) + 1;
  return CadlagPath(dim_, new_horizon, {times_.begin(), times_.begin() + k},
                    {values_.begin(), values_.begin() + k * dim_}, {modes_.begin(), modes_.begin() + k},
                    {anchor_times_.begin(), anchor_times_.begin() + k},
                    {anchor_values_.begin(), anchor_values_.begin() + k * dim_});
}

std::vector<Knot> CadlagPath::knots() const {
  std::vector<Knot> out;
  out.reserve(times_.size());
  for (std::size_t i = 0; i < times_.size(); ++i) {
    Knot k;
    k.time = times_[i];
    k.value.assign(value(i).begin(), value(i).end());
    k.mode = modes_[i];
    if (k.mode == Segment::linear) {
      const bool default_anchor = i + 1 < times_.size() && anchor_times_[i] == times_[i + 1] &&
                                  same(anchor_value(i), value(i + 1));
      if (!default_anchor) {
        k.anchor_time = anchor_times_[i];
        k.anchor_value.assign(anchor_value(i).begin(), anchor_value(i).end());
      }
    }
    out.push_back(std::move(k));
  }
  return out;
}

double eta(const CadlagPath& x, double t) {
  if (!(t >= 0.0 && t <= x.horizon())) throw DomainError("eta outside [0, horizon]");
  if (t == 0.0) return 0.0;
  const Vec c = x.eval(t);
  const auto& ts = x.times();
  auto j = static_cast<std::size_t>(std::lower_bound(ts.begin(), ts.end(), t) - ts.begin()) - 1;
  if (!x.segment_constant(j) || !same(x.value(j), c)) return t;
  while (j > 0) {
    --j;
    if (!x.segment_constant(j) || !same(x.value(j), c)) return ts[j + 1];
  }
  return 0.0;
}

double theta(const CadlagPath& x, double t) {
  if (!(t >= 0.0 && t <= x.horizon())) throw DomainError("theta outside [0, horizon]");
  const Vec c = t == 0.0 ? x.eval(0.0) : x.left_limit(t);
  if (!same(x.eval(t), c)) return t;
  const std::size_t i = x.segment_index(t);
  if (!x.segment_constant(i) && t < x.segment_end(i)) return t;
  for (std::size_t k = i + 1; k < x.size(); ++k) {
    if (!same(x.value(k), c)) return x.time(k);
    if (!x.segment_constant(k) && x.time(k) < x.segment_end(k)) return x.time(k);
  }
  return kInfinity;
}

}  // namespace ctrw
