#pragma once

#include <vector>

#include "ctrwlab/path.hpp"

namespace ctrw {

/// A scalar CadlagPath known to be nondecreasing with y(0) >= 0.
class MonotonePath {
 public:
  explicit MonotonePath(CadlagPath path);

  const CadlagPath& path() const { return path_; }
  double horizon() const { return path_.horizon(); }
  double eval(double t) const { return path_.eval1(t); }
  /// y(horizon): right end of the range on which the inverse is available.
  double top() const { return path_.eval1(path_.horizon()); }

 private:
  CadlagPath path_;
};

/// Piecewise-affine function on [0, end] whose value at a breakpoint may
/// differ from both one-sided limits. Used for x^-, x^+ and compositions,
/// which need not be right-continuous.
///
/// On the open interval (b_i, b_{i+1}) the function is affine from right[i]
/// to left[i+1].
class PiecewiseFunction {
 public:
  PiecewiseFunction() = default;
  explicit PiecewiseFunction(const CadlagPath& path);

  std::size_t dim() const { return dim_; }
  double end() const { return breaks_.back(); }
  const std::vector<double>& breaks() const { return breaks_; }

  Vec eval(double u) const;
  Vec eval_left(double u) const;
  Vec eval_right(double u) const;

  /// u -> f(u-), with the value at 0 kept.
  PiecewiseFunction left_version() const;
  /// u -> f(u+), with the value at the right end kept (one-sided there).
  PiecewiseFunction right_version() const;

  /// outer o inner for a scalar nondecreasing inner whose range lies in
  /// [0, outer.end()].
  static PiecewiseFunction compose(const PiecewiseFunction& outer, const PiecewiseFunction& inner);

  /// Knot form; requires right-continuity at every breakpoint.
  CadlagPath to_cadlag() const;

 private:
  enum class Side { point, left, right };
  void eval_into(double u, Side side, double* out) const;

  std::size_t dim_ = 1;
  std::vector<double> breaks_;
  std::vector<double> point_;
  std::vector<double> left_;
  std::vector<double> right_;
};

/// f(x): replaces every stair (maximal open interval of constancy whose
/// right end is a jump) by the segment joining its ends. A final plateau
/// with no closing jump inside the horizon is left unchanged.
CadlagPath stair_fill(const CadlagPath& path);

/// Pointwise reference form of f: x(eta) + (x(theta) - x(eta)) (t - eta) / (theta - eta).
Vec stair_fill_at(const CadlagPath& path, double t);

/// y^{-1}(t) = inf{s > 0 : y(s) > t} on [0, y(horizon)]. The value at
/// y(horizon) itself is the horizon, which stands in for the unavailable
/// continuation of y.
MonotonePath right_inverse(const MonotonePath& y);

PiecewiseFunction left_limit_path(const CadlagPath& x);
PiecewiseFunction right_limit_path(const CadlagPath& x);
PiecewiseFunction left_limit_path(const PiecewiseFunction& x);
PiecewiseFunction right_limit_path(const PiecewiseFunction& x);

/// x o y for a nondecreasing y whose range lies within x's horizon.
CadlagPath compose(const CadlagPath& x, const MonotonePath& y);

/// Phi(x, y) = (x^- o (y^{-1})^-)^+ on [0, y(horizon)].
/// Requires x.horizon() >= y.horizon().
CadlagPath phi(const CadlagPath& x, const MonotonePath& y);

/// (y o y^{-1})^{-1}, computed by composing and inverting. Independent of phi.
MonotonePath inverse_of_composed(const MonotonePath& y);

}  // namespace ctrw
