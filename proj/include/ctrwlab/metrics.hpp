#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "json.hpp"

#include "ctrwlab/path.hpp"

namespace ctrw {

/// A point that should lie on a completed graph but does not, or a subset
/// that is not ordered along it.
class InvalidSubsetError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Point (z, t) of value x time space.
struct GraphPoint {
  Vec z;
  double t = 0.0;
  friend bool operator==(const GraphPoint&, const GraphPoint&) = default;
};

/// Sup norm on R^{d+1}: max(|z - z'|_inf, |t - t'|).
double point_distance(const GraphPoint& a, const GraphPoint& b);

/// Finite ordered subset (z_0, t_0), ..., (z_m, t_m) of a completed graph.
using OrderedSubset = std::vector<GraphPoint>;

/// Completed graph of x on [0, T] as a polyline. Consecutive vertices are
/// joined either by the graph of x over a segment (time advances) or by the
/// vertical segment [x(tau-), x(tau)] of a jump (time frozen). Walking the
/// polyline visits the graph in its order.
class CompletedGraph {
 public:
  CompletedGraph(const CadlagPath& x, double T);

  std::size_t dim() const { return dim_; }
  double horizon() const { return t_.back(); }
  /// Number of polyline vertices.
  std::size_t size() const { return t_.size(); }
  std::span<const double> z(std::size_t k) const { return {z_.data() + k * dim_, dim_}; }
  double t(std::size_t k) const { return t_[k]; }
  GraphPoint vertex(std::size_t k) const;

  /// Point at polyline position s in [0, size() - 1]; s = k + f lies on the
  /// piece from vertex k to vertex k + 1.
  GraphPoint at(double s) const;

  /// Smallest polyline position of p, or nullopt when p is off the graph by
  /// more than tol (sup norm).
  std::optional<double> locate(const GraphPoint& p, double tol = 1e-9) const;

  /// All vertices plus evenly spaced points splitting every piece into
  /// parts of sup-length below max_piece. With multiplier k each piece gets
  /// k times as many parts, which keeps every point of the k = 1 result.
  OrderedSubset refine(double max_piece, std::size_t multiplier = 1) const;

  friend bool operator==(const CompletedGraph&, const CompletedGraph&) = default;

 private:
  std::size_t dim_ = 1;
  std::vector<double> z_;
  std::vector<double> t_;
};

CompletedGraph completed_graph(const CadlagPath& x, double T);

/// d^(A, G): largest distance from a graph point lying between two
/// consecutive points of A to the farther of the two. Throws
/// InvalidSubsetError if A is off the graph, out of order, or does not start
/// at the first vertex and end at the last.
double order_consistent_distance(const OrderedSubset& a, const CompletedGraph& g);

/// d*(A, B) = max over 0 <= i <= m of |a_i - b_i|.
double subset_distance(const OrderedSubset& a, const OrderedSubset& b);

struct Bracket {
  double lower = 0.0;
  double upper = 0.0;
};

/// Discrete Frechet distance between two point sequences under the sup norm.
double discrete_frechet(const OrderedSubset& p, const OrderedSubset& q);

/// M1 distance on [0, T]: Frechet distance between the completed graphs.
/// Decided exactly for a given radius and bisected until upper - lower <= mesh.
/// A horizon that is a jump of either path is moved right by mesh steps.
Bracket m1_distance(const CadlagPath& x1, const CadlagPath& x2, double T, double mesh);

/// J1 distance on [0, T]. The upper bound is attained by an explicit
/// piecewise-linear time change through a mesh grid plus all knots; the
/// lower bound is the M1 lower bound.
Bracket j1_distance(const CadlagPath& x1, const CadlagPath& x2, double T, double mesh);

/// sup over [0, T] of |x1(t) - x2(t)|, exact.
double uniform_distance(const CadlagPath& x1, const CadlagPath& x2, double T);

struct M1Certificate {
  double epsilon = 0.0;
  double horizon = 0.0;
  OrderedSubset a;
  /// a_n[k] is the subset for x_{k+1}; empty for indices below n1.
  std::vector<OrderedSubset> a_n;
  /// 1-based index from which every bound holds.
  std::size_t n1 = 1;
};

/// Searches for A and A_n with d^(A, G_x) < eps, d^(A_n, G_{x_n}) < eps and
/// d*(A, A_n) < eps for all n >= n1. nullopt when the last x_n fails.
std::optional<M1Certificate> build_m1_certificate(const CadlagPath& x, const std::vector<CadlagPath>& xs,
                                                  double eps, double T);

/// Independent re-check of every inequality. Returns false when a bound or
/// an A_n membership fails; throws InvalidSubsetError when A itself is
/// malformed or the cardinalities differ.
bool check_certificate(const M1Certificate& cert, const CadlagPath& x, const std::vector<CadlagPath>& xs);

nlohmann::json to_json(const M1Certificate& cert);

}  // namespace ctrw
