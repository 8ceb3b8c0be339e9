#include "ctrwlab/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace ctrw {

namespace {

// Polyline in R^D stored flat, D = d + 1 with time last.
struct Polyline {
  std::size_t dim = 0;
  std::vector<double> pts;

  explicit Polyline(const CompletedGraph& g) : dim(g.dim() + 1) {
    pts.reserve(g.size() * dim);
    for (std::size_t k = 0; k < g.size(); ++k) {
      pts.insert(pts.end(), g.z(k).begin(), g.z(k).end());
      pts.push_back(g.t(k));
    }
  }
  std::size_t size() const { return pts.size() / dim; }
  const double* p(std::size_t k) const { return pts.data() + k * dim; }
};

double dist(const double* a, const double* b, std::size_t d) {
  double m = 0.0;
  for (std::size_t c = 0; c < d; ++c) m = std::max(m, std::abs(a[c] - b[c]));
  return m;
}

struct Interval {
  double lo = 1.0;
  double hi = 0.0;
  bool empty() const { return lo > hi; }
};

// {lambda in [0, 1] : |a + lambda (b - a) - q| <= r}.
Interval free_interval(const double* a, const double* b, const double* q, std::size_t d, double r) {
  Interval iv{0.0, 1.0};
  for (std::size_t c = 0; c < d; ++c) {
    const double delta = b[c] - a[c];
    const double off = q[c] - a[c];
    if (delta == 0.0) {
      if (std::abs(off) > r) return {};
      continue;
    }
    double l = (off - r) / delta;
    double h = (off + r) / delta;
    if (l > h) std::swap(l, h);
    iv.lo = std::max(iv.lo, l);
    iv.hi = std::min(iv.hi, h);
    if (iv.empty()) return {};
  }
  return iv;
}

// min over lambda in [0, 1] of |a + lambda (b - a) - q|. The objective is a
// max of |affine| functions, so its minimum sits at an endpoint, a zero of
// one coordinate, or a crossing of two coordinates' graphs.
double point_segment_distance(const double* a, const double* b, const double* q, std::size_t d) {
  auto value = [&](double lambda) {
    double m = 0.0;
    for (std::size_t c = 0; c < d; ++c) m = std::max(m, std::abs(a[c] + lambda * (b[c] - a[c]) - q[c]));
    return m;
  };
  double best = std::min(value(0.0), value(1.0));
  auto consider = [&](double lambda) {
    if (lambda > 0.0 && lambda < 1.0) best = std::min(best, value(lambda));
  };
  for (std::size_t c = 0; c < d; ++c) {
    const double sc = b[c] - a[c];
    const double oc = a[c] - q[c];
    if (sc != 0.0) consider(-oc / sc);
    for (std::size_t e = c + 1; e < d; ++e) {
      const double se = b[e] - a[e];
      const double oe = a[e] - q[e];
      if (sc != se) consider((oe - oc) / (sc - se));
      if (sc != -se) consider(-(oe + oc) / (sc + se));
    }
  }
  return best;
}

double point_polyline_distance(const double* q, const Polyline& poly) {
  if (poly.size() == 1) return dist(q, poly.p(0), poly.dim);
  double best = kInfinity;
  for (std::size_t k = 0; k + 1 < poly.size(); ++k)
    best = std::min(best, point_segment_distance(poly.p(k), poly.p(k + 1), q, poly.dim));
  return best;
}

// Alt-Godau reachability in the free space of radius r.
bool frechet_within(const Polyline& P, const Polyline& Q, double r) {
  const std::size_t d = P.dim;
  const std::size_t np = P.size();
  const std::size_t nq = Q.size();
  if (dist(P.p(0), Q.p(0), d) > r || dist(P.p(np - 1), Q.p(nq - 1), d) > r) return false;
  if (np == 1 || nq == 1) {
    const Polyline& one = np == 1 ? P : Q;
    const Polyline& other = np == 1 ? Q : P;
    for (std::size_t k = 0; k < other.size(); ++k)
      if (dist(one.p(0), other.p(k), d) > r) return false;
    return true;
  }
  // rq[j]: reachable part of Q-segment j at the current P-vertex.
  std::vector<Interval> rq(nq - 1), rq_next(nq - 1);
  bool open = true;
  for (std::size_t j = 0; j + 1 < nq; ++j) {
    Interval f = free_interval(Q.p(j), Q.p(j + 1), P.p(0), d, r);
    if (open && !f.empty() && f.lo == 0.0) {
      rq[j] = {0.0, f.hi};
      open = f.hi == 1.0;
    } else {
      rq[j] = {};
      open = false;
    }
  }
  bool bottom_open = true;
  Interval top;
  for (std::size_t i = 0; i + 1 < np; ++i) {
    // Reachable part of P-segment i at Q-vertex 0.
    Interval bottom;
    Interval f0 = free_interval(P.p(i), P.p(i + 1), Q.p(0), d, r);
    if (bottom_open && !f0.empty() && f0.lo == 0.0) {
      bottom = {0.0, f0.hi};
      bottom_open = f0.hi == 1.0;
    } else {
      bottom_open = false;
    }
    for (std::size_t j = 0; j + 1 < nq; ++j) {
      const Interval& left = rq[j];
      Interval right = free_interval(Q.p(j), Q.p(j + 1), P.p(i + 1), d, r);
      if (!right.empty()) {
        if (!bottom.empty()) {
        } else if (!left.empty()) {
          right.lo = std::max(right.lo, left.lo);
        } else {
          right = {};
        }
      }
      top = free_interval(P.p(i), P.p(i + 1), Q.p(j + 1), d, r);
      if (!top.empty()) {
        if (!left.empty()) {
        } else if (!bottom.empty()) {
          top.lo = std::max(top.lo, bottom.lo);
        } else {
          top = {};
        }
      }
      if (right.empty()) right = {};
      if (top.empty()) top = {};
      rq_next[j] = right;
      bottom = top;
    }
    std::swap(rq, rq_next);
  }
  return (!top.empty() && top.hi == 1.0) || (!rq[nq - 2].empty() && rq[nq - 2].hi == 1.0);
}

double move_off_jumps(const CadlagPath& x1, const CadlagPath& x2, double T, double mesh) {
  const double limit = std::min(x1.horizon(), x2.horizon());
  double t = T;
  for (int guard = 0; guard < 1000000; ++guard) {
    if (!x1.is_discontinuity(t) && !x2.is_discontinuity(t)) return t;
    if (t + mesh > limit) break;
    t += mesh;
  }
  return T;
}

void check_common(const CadlagPath& x1, const CadlagPath& x2, double T, double mesh) {
  if (!(mesh > 0.0)) throw std::invalid_argument("mesh must be positive");
  if (x1.dim() != x2.dim()) throw std::invalid_argument("paths differ in dimension");
  if (!(T >= 0.0 && T <= x1.horizon() && T <= x2.horizon()))
    throw DomainError("distance horizon outside the paths' domain");
}

double tolerance_for(const GraphPoint& p, double tol) {
  double scale = std::abs(p.t);
  for (double v : p.z) scale = std::max(scale, std::abs(v));
  return tol * (1.0 + scale);
}

}  // namespace

double point_distance(const GraphPoint& a, const GraphPoint& b) {
  if (a.z.size() != b.z.size()) throw std::invalid_argument("graph points differ in dimension");
  return std::max(sup_distance(a.z, b.z), std::abs(a.t - b.t));
}

// ---------------------------------------------------------------------------
// CompletedGraph

CompletedGraph::CompletedGraph(const CadlagPath& x, double T) : dim_(x.dim()) {
  if (!(T >= 0.0 && T <= x.horizon())) throw DomainError("graph horizon outside the path's domain");
  auto push = [&](std::span<const double> v, double t) {
    z_.insert(z_.end(), v.begin(), v.end());
    t_.push_back(t);
  };
  std::size_t i = 0;
  for (; i < x.size() && x.time(i) <= T; ++i) {
    if (i > 0 && x.jumps_at(i)) push(x.segment_end_value(i - 1), x.time(i));
    push(x.value(i), x.time(i));
  }
  if (T > x.time(i - 1)) push(x.eval(T), T);
}

GraphPoint CompletedGraph::vertex(std::size_t k) const {
  auto v = z(k);
  return {Vec(v.begin(), v.end()), t_[k]};
}

GraphPoint CompletedGraph::at(double s) const {
  if (!(s >= 0.0 && s <= static_cast<double>(size() - 1))) throw DomainError("graph position out of range");
  if (size() == 1) return vertex(0);
  const auto k = std::min(static_cast<std::size_t>(s), size() - 2);
  const double f = s - static_cast<double>(k);
  if (f == 0.0) return vertex(k);
  if (f == 1.0) return vertex(k + 1);
  GraphPoint p{Vec(dim_), t_[k] + (t_[k + 1] - t_[k]) * f};
  for (std::size_t c = 0; c < dim_; ++c) p.z[c] = z(k)[c] + (z(k + 1)[c] - z(k)[c]) * f;
  return p;
}

std::optional<double> CompletedGraph::locate(const GraphPoint& p, double tol) const {
  if (p.z.size() != dim_) throw InvalidSubsetError("graph point has the wrong dimension");
  const double eps = tolerance_for(p, tol);
  if (size() == 1) {
    if (point_distance(p, vertex(0)) <= eps) return 0.0;
    return std::nullopt;
  }
  for (std::size_t k = 0; k + 1 < size(); ++k) {
    const double ta = t_[k], tb = t_[k + 1];
    double f;
    if (ta == tb) {
      if (std::abs(p.t - ta) > eps) continue;
      std::size_t best = 0;
      double span = 0.0;
      for (std::size_t c = 0; c < dim_; ++c) {
        const double s = std::abs(z(k + 1)[c] - z(k)[c]);
        if (s > span) span = s, best = c;
      }
      f = (p.z[best] - z(k)[best]) / (z(k + 1)[best] - z(k)[best]);
    } else {
      if (p.t < ta - eps || p.t > tb + eps) continue;
      f = (p.t - ta) / (tb - ta);
    }
    f = std::clamp(f, 0.0, 1.0);
    const double s = static_cast<double>(k) + f;
    if (point_distance(p, at(s)) <= eps) return s;
  }
  return std::nullopt;
}

OrderedSubset CompletedGraph::refine(double max_piece, std::size_t multiplier) const {
  if (!(max_piece > 0.0) || multiplier == 0) throw std::invalid_argument("refinement step must be positive");
  OrderedSubset out;
  for (std::size_t k = 0; k + 1 < size(); ++k) {
    const GraphPoint a = vertex(k);
    const GraphPoint b = vertex(k + 1);
    out.push_back(a);
    const auto m = (static_cast<std::size_t>(std::floor(point_distance(a, b) / max_piece)) + 1) * multiplier;
    for (std::size_t j = 1; j < m; ++j) {
      const double f = static_cast<double>(j) / static_cast<double>(m);
      GraphPoint p{Vec(dim_), a.t + (b.t - a.t) * f};
      for (std::size_t c = 0; c < dim_; ++c) p.z[c] = a.z[c] + (b.z[c] - a.z[c]) * f;
      out.push_back(std::move(p));
    }
  }
  out.push_back(vertex(size() - 1));
  return out;
}

CompletedGraph completed_graph(const CadlagPath& x, double T) { return CompletedGraph(x, T); }

// ---------------------------------------------------------------------------
// d^, d*

double order_consistent_distance(const OrderedSubset& a, const CompletedGraph& g) {
  if (a.empty()) throw InvalidSubsetError("ordered subset is empty");
  std::vector<double> pos;
  pos.reserve(a.size());
  for (const auto& p : a) {
    auto s = g.locate(p);
    if (!s) throw InvalidSubsetError("point is not on the completed graph");
    if (!pos.empty() && *s < pos.back()) throw InvalidSubsetError("subset is not ordered along the graph");
    pos.push_back(*s);
  }
  const double last = static_cast<double>(g.size() - 1);
  if (pos.front() != 0.0 || std::abs(pos.back() - last) > 1e-9)
    throw InvalidSubsetError("subset must start and end at the graph's endpoints");

  double d = 0.0;
  for (std::size_t i = 0; i + 1 < a.size(); ++i) {
    d = std::max(d, point_distance(a[i], a[i + 1]));
    const auto first = static_cast<std::size_t>(std::floor(pos[i])) + 1;
    for (std::size_t k = first; static_cast<double>(k) < pos[i + 1]; ++k) {
      const GraphPoint v = g.vertex(k);
      d = std::max({d, point_distance(v, a[i]), point_distance(v, a[i + 1])});
    }
  }
  return d;
}

double subset_distance(const OrderedSubset& a, const OrderedSubset& b) {
  if (a.size() != b.size()) throw std::invalid_argument("ordered subsets differ in cardinality");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, point_distance(a[i], b[i]));
  return d;
}

double discrete_frechet(const OrderedSubset& p, const OrderedSubset& q) {
  if (p.empty() || q.empty()) throw std::invalid_argument("discrete Frechet of an empty sequence");
  std::vector<double> prev(q.size()), cur(q.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) {
      const double c = point_distance(p[i], q[j]);
      double best;
      if (i == 0 && j == 0) {
        best = 0.0;
      } else if (i == 0) {
        best = cur[j - 1];
      } else if (j == 0) {
        best = prev[0];
      } else {
        best = std::min({prev[j], prev[j - 1], cur[j - 1]});
      }
      cur[j] = std::max(best, c);
    }
    std::swap(prev, cur);
  }
  return prev.back();
}

// ---------------------------------------------------------------------------
// Distances

Bracket m1_distance(const CadlagPath& x1, const CadlagPath& x2, double T, double mesh) {
  check_common(x1, x2, T, mesh);
  T = move_off_jumps(x1, x2, T, mesh);
  const CompletedGraph g1(x1, T), g2(x2, T);
  if (g1 == g2) return {0.0, 0.0};
  const Polyline P(g1), Q(g2);
  const std::size_t d = P.dim;

  double lower = std::max(dist(P.p(0), Q.p(0), d), dist(P.p(P.size() - 1), Q.p(Q.size() - 1), d));
  for (std::size_t k = 0; k < P.size(); ++k) lower = std::max(lower, point_polyline_distance(P.p(k), Q));
  for (std::size_t k = 0; k < Q.size(); ++k) lower = std::max(lower, point_polyline_distance(Q.p(k), P));
  if (frechet_within(P, Q, lower)) return {lower, lower};

  double upper = lower;
  for (std::size_t a = 0; a < P.size(); ++a)
    for (std::size_t b = 0; b < Q.size(); ++b) upper = std::max(upper, dist(P.p(a), Q.p(b), d));
  while (upper - lower > mesh) {
    const double mid = 0.5 * (lower + upper);
    if (frechet_within(P, Q, mid)) {
      upper = mid;
    } else {
      lower = mid;
    }
  }
  return {lower, upper};
}

Bracket j1_distance(const CadlagPath& x1, const CadlagPath& x2, double T, double mesh) {
  check_common(x1, x2, T, mesh);
  T = move_off_jumps(x1, x2, T, mesh);
  const Bracket m1 = m1_distance(x1, x2, T, mesh);
  const double uniform = uniform_distance(x1, x2, T);
  if (m1.upper == 0.0) return {0.0, 0.0};

  // Candidate breakpoints of the time change on each side.
  constexpr double kMaxCells = 4000.0;
  const double h = std::max(mesh, T / kMaxCells);
  struct Side {
    std::vector<double> t;
    std::vector<char> knot;
    std::vector<double> right, left;  // flat, d per point
  };
  const std::size_t d = x1.dim();
  auto build = [&](const CadlagPath& x) {
    std::vector<std::pair<double, char>> pts;
    for (std::size_t i = 0; i < x.size() && x.time(i) <= T; ++i) pts.emplace_back(x.time(i), 1);
    for (double k = 1.0; k * h < T; k += 1.0) pts.emplace_back(k * h, 0);
    // Short ramps get their own subdivision so a jump can be placed inside them.
    constexpr int kRampPieces = 64;
    for (std::size_t i = 0; i < x.size() && x.time(i) < T; ++i) {
      if (x.segment_constant(i)) continue;
      const double a = x.time(i), b = std::min(x.segment_end(i), T);
      if ((b - a) / kRampPieces >= h) continue;
      for (int k = 1; k < kRampPieces; ++k) pts.emplace_back(a + (b - a) * k / kRampPieces, 0);
    }
    pts.emplace_back(T, 1);
    std::sort(pts.begin(), pts.end());
    Side s;
    for (auto [t, knot] : pts) {
      if (!s.t.empty() && s.t.back() == t) {
        s.knot.back() = std::max(s.knot.back(), knot);
        continue;
      }
      s.t.push_back(t);
      s.knot.push_back(knot);
      const Vec r = x.eval(t);
      const Vec l = t > 0.0 ? x.left_limit(t) : r;
      s.right.insert(s.right.end(), r.begin(), r.end());
      s.left.insert(s.left.end(), l.begin(), l.end());
    }
    return s;
  };
  const Side A = build(x1), B = build(x2);
  auto diff = [&](const std::vector<double>& u, std::size_t i, const std::vector<double>& v, std::size_t j) {
    return dist(u.data() + i * d, v.data() + j * d, d);
  };
  const std::size_t na = A.t.size(), nb = B.t.size();
  // cost[p][q]: best max-deviation of a time change matching A.t[p] with B.t[q].
  std::vector<std::vector<double>> rows(3, std::vector<double>(nb, kInfinity));
  auto row = [&](std::size_t p) -> std::vector<double>& { return rows[p % 3]; };
  for (std::size_t p = 0; p < na; ++p) {
    std::vector<double>& cur = row(p);
    std::fill(cur.begin(), cur.end(), kInfinity);
    if (p == 0) {
      cur[0] = diff(A.right, 0, B.right, 0);
      continue;
    }
    for (std::size_t q = 1; q < nb; ++q) {
      const double shift = std::abs(A.t[p] - B.t[q]);
      if (shift >= uniform) continue;
      double best = kInfinity;
      auto from = [&](std::size_t p0, std::size_t q0) {
        const double c0 = row(p0)[q0];
        if (c0 >= best) return;
        const double piece = std::max(diff(A.right, p0, B.right, q0), diff(A.left, p, B.left, q));
        best = std::min(best, std::max(c0, piece));
      };
      from(p - 1, q - 1);
      if (p >= 2 && !A.knot[p - 1]) from(p - 2, q - 1);
      if (q >= 2 && !B.knot[q - 1]) from(p - 1, q - 2);
      cur[q] = std::max(best, shift);
    }
  }
  const double dp = std::max(row(na - 1)[nb - 1], diff(A.right, na - 1, B.right, nb - 1));
  const double upper = std::min(dp, uniform);
  return {std::min(m1.lower, upper), upper};
}

double uniform_distance(const CadlagPath& x1, const CadlagPath& x2, double T) {
  if (x1.dim() != x2.dim()) throw std::invalid_argument("paths differ in dimension");
  if (!(T >= 0.0 && T <= x1.horizon() && T <= x2.horizon()))
    throw DomainError("distance horizon outside the paths' domain");
  std::vector<double> breaks;
  for (double t : x1.times())
    if (t <= T) breaks.push_back(t);
  for (double t : x2.times())
    if (t <= T) breaks.push_back(t);
  breaks.push_back(T);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  double d = 0.0;
  for (double t : breaks) {
    d = std::max(d, sup_distance(x1.eval(t), x2.eval(t)));
    if (t > 0.0) d = std::max(d, sup_distance(x1.left_limit(t), x2.left_limit(t)));
  }
  return d;
}

// ---------------------------------------------------------------------------
// Certificates

namespace {

std::size_t index_of(const OrderedSubset& s, const GraphPoint& p) {
  auto it = std::find(s.begin(), s.end(), p);
  return it == s.end() ? s.size() : static_cast<std::size_t>(it - s.begin());
}

// Discrete Frechet coupling of a[i0..i1] with c[j0..j1]; for every i picks
// the coupled c index closest to a[i]. Writes into choice[i0..i1].
void couple(const OrderedSubset& a, const OrderedSubset& c, std::size_t i0, std::size_t i1, std::size_t j0,
            std::size_t j1, std::vector<std::size_t>& choice) {
  const std::size_t ni = i1 - i0 + 1, nj = j1 - j0 + 1;
  std::vector<double> cost(ni * nj);
  std::vector<unsigned char> from(ni * nj, 0);  // 0 diag, 1 up (i-1), 2 left (j-1)
  auto at = [&](std::size_t i, std::size_t j) { return i * nj + j; };
  for (std::size_t i = 0; i < ni; ++i) {
    for (std::size_t j = 0; j < nj; ++j) {
      const double here = point_distance(a[i0 + i], c[j0 + j]);
      double best = 0.0;
      unsigned char dir = 0;
      if (i == 0 && j == 0) {
        best = 0.0;
      } else if (i == 0) {
        best = cost[at(0, j - 1)], dir = 2;
      } else if (j == 0) {
        best = cost[at(i - 1, 0)], dir = 1;
      } else {
        best = cost[at(i - 1, j - 1)], dir = 0;
        if (cost[at(i - 1, j)] < best) best = cost[at(i - 1, j)], dir = 1;
        if (cost[at(i, j - 1)] < best) best = cost[at(i, j - 1)], dir = 2;
      }
      cost[at(i, j)] = std::max(best, here);
      from[at(i, j)] = dir;
    }
  }
  std::vector<double> best_d(ni, kInfinity);
  std::size_t i = ni - 1, j = nj - 1;
  while (true) {
    const double dd = point_distance(a[i0 + i], c[j0 + j]);
    if (dd <= best_d[i]) best_d[i] = dd, choice[i0 + i] = j0 + j;
    if (i == 0 && j == 0) break;
    const unsigned char dir = from[at(i, j)];
    if (dir == 0) {
      --i, --j;
    } else if (dir == 1) {
      --i;
    } else {
      --j;
    }
  }
  choice[i0] = j0;
  choice[i1] = j1;
}

std::optional<OrderedSubset> match_subset(const CadlagPath& x, const OrderedSubset& a, const CadlagPath& xn,
                                          double eps, double T) {
  const CompletedGraph gn(xn, T);
  const OrderedSubset c = gn.refine(eps / 4.0, 2);

  // Anchor large jumps of x to nearby jumps of x_n of similar size.
  std::vector<std::pair<std::size_t, std::size_t>> anchors{{0, 0}};
  const auto jumps_n = xn.large_jumps(eps / 2.0, T);
  for (const JumpRecord& j : x.large_jumps(eps, T)) {
    const JumpRecord* best = nullptr;
    for (const JumpRecord& k : jumps_n) {
      if (std::abs(k.time - j.time) > eps || std::abs(k.magnitude - j.magnitude) >= eps) continue;
      if (!best || std::abs(k.time - j.time) < std::abs(best->time - j.time)) best = &k;
    }
    if (!best) continue;
    const std::size_t ib = index_of(a, {j.left_value, j.time});
    const std::size_t it = index_of(a, {j.right_value, j.time});
    const std::size_t jb = index_of(c, {best->left_value, best->time});
    const std::size_t jt = index_of(c, {best->right_value, best->time});
    if (ib >= a.size() || it >= a.size() || jb >= c.size() || jt >= c.size()) continue;
    if (ib > anchors.back().first && jb > anchors.back().second && it > ib && jt > jb) {
      anchors.emplace_back(ib, jb);
      anchors.emplace_back(it, jt);
    }
  }
  if (anchors.back().first == a.size() - 1 || anchors.back().second == c.size() - 1) {
    if (anchors.back() != std::pair{a.size() - 1, c.size() - 1}) anchors.pop_back();
  }
  if (anchors.back() != std::pair{a.size() - 1, c.size() - 1}) anchors.emplace_back(a.size() - 1, c.size() - 1);

  std::vector<std::size_t> choice(a.size());
  for (std::size_t k = 0; k + 1 < anchors.size(); ++k)
    couple(a, c, anchors[k].first, anchors[k + 1].first, anchors[k].second, anchors[k + 1].second, choice);
  OrderedSubset out;
  out.reserve(a.size());
  for (std::size_t i : choice) out.push_back(c[i]);
  if (!(subset_distance(a, out) < eps)) return std::nullopt;
  if (!(order_consistent_distance(out, gn) < eps)) return std::nullopt;
  return out;
}

}  // namespace

std::optional<M1Certificate> build_m1_certificate(const CadlagPath& x, const std::vector<CadlagPath>& xs,
                                                  double eps, double T) {
  if (!(eps > 0.0)) throw std::invalid_argument("certificate epsilon must be positive");
  if (xs.empty()) return std::nullopt;
  const CompletedGraph g(x, T);
  M1Certificate cert;
  cert.epsilon = eps;
  cert.horizon = T;
  cert.a = g.refine(eps / 4.0);
  if (!(order_consistent_distance(cert.a, g) < eps)) return std::nullopt;
  cert.a_n.resize(xs.size());
  std::size_t n1 = xs.size() + 1;
  for (std::size_t k = xs.size(); k-- > 0;) {
    auto an = match_subset(x, cert.a, xs[k], eps, T);
    if (!an) break;
    cert.a_n[k] = std::move(*an);
    n1 = k + 1;
  }
  if (n1 > xs.size()) return std::nullopt;
  cert.n1 = n1;
  return cert;
}

bool check_certificate(const M1Certificate& cert, const CadlagPath& x, const std::vector<CadlagPath>& xs) {
  const double eps = cert.epsilon;
  if (!(eps > 0.0)) throw InvalidSubsetError("certificate epsilon must be positive");
  if (cert.a_n.size() != xs.size()) throw InvalidSubsetError("certificate covers a different sequence length");
  if (cert.n1 < 1 || cert.n1 > xs.size()) throw InvalidSubsetError("certificate start index out of range");
  const CompletedGraph g(x, cert.horizon);
  if (!(order_consistent_distance(cert.a, g) < eps)) return false;
  for (std::size_t k = cert.n1 - 1; k < xs.size(); ++k) {
    const OrderedSubset& an = cert.a_n[k];
    if (an.size() != cert.a.size()) throw InvalidSubsetError("A_n and A differ in cardinality");
    const CompletedGraph gn(xs[k], cert.horizon);
    try {
      if (!(order_consistent_distance(an, gn) < eps)) return false;
    } catch (const InvalidSubsetError&) {
      return false;
    }
    if (!(subset_distance(cert.a, an) < eps)) return false;
  }
  return true;
}

nlohmann::json to_json(const M1Certificate& cert) {
  auto subset = [](const OrderedSubset& s) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& p : s) out.push_back(nlohmann::json::array({p.t, p.z}));
    return out;
  };
  nlohmann::json an = nlohmann::json::array();
  for (const auto& s : cert.a_n) an.push_back(subset(s));
  return {{"epsilon", cert.epsilon}, {"horizon", cert.horizon}, {"m", cert.a.size() - 1},
          {"n1", cert.n1},           {"a", subset(cert.a)},     {"a_n", std::move(an)}};
}

}  // namespace ctrw
