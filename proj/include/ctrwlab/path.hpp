#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ctrw {

/// Raised when an argument lies outside the domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

using Vec = std::vector<double>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Sup norm max_i |a_i|.
double sup_norm(std::span<const double> a);
/// Sup-norm distance between two equally sized vectors.
double sup_distance(std::span<const double> a, std::span<const double> b);

enum class Segment { hold, linear };

/// One breakpoint of a path, as accepted by the CadlagPath constructor.
///
/// A hold knot keeps `value` until the next knot. A linear knot follows the
/// line through (time, value) and an anchor point; the anchor defaults to the
/// next knot, which makes the segment continuous into it. An explicit anchor
/// lets a ramp end in a jump, or survive truncation unchanged.
struct Knot {
  double time = 0.0;
  Vec value;
  Segment mode = Segment::hold;
  std::optional<double> anchor_time;
  Vec anchor_value;
};

struct JumpRecord {
  double time = 0.0;
  Vec left_value;
  Vec right_value;
  double magnitude = 0.0;
};

/// Right-continuous path with finitely many breakpoints on [0, horizon].
///
/// Segment i covers [t_i, t_{i+1}) (the last one covers [t_last, horizon]).
/// Constancy and jump detection compare stored doubles exactly; plateaus are
/// exact because paths are built from exact partial sums.
class CadlagPath {
 public:
  CadlagPath() = default;
  CadlagPath(std::size_t dim, double horizon, const std::vector<Knot>& knots);

  /// Flat-array constructor for hot paths. `anchor_times` / `anchor_values`
  /// are read only for linear knots; pass empty vectors for pure hold paths.
  CadlagPath(std::size_t dim, double horizon, std::vector<double> times,
             std::vector<double> values, std::vector<Segment> modes,
             std::vector<double> anchor_times = {},
             std::vector<double> anchor_values = {});

  /// Scalar hold-mode path from (time, value) pairs.
  static CadlagPath step(double horizon, const std::vector<std::pair<double, double>>& knots);

  std::size_t dim() const { return dim_; }
  double horizon() const { return horizon_; }
  std::size_t size() const { return times_.size(); }

  double time(std::size_t i) const { return times_[i]; }
  std::span<const double> value(std::size_t i) const {
    return {values_.data() + i * dim_, dim_};
  }
  Segment mode(std::size_t i) const { return modes_[i]; }
  double anchor_time(std::size_t i) const { return anchor_times_[i]; }
  std::span<const double> anchor_value(std::size_t i) const {
    return {anchor_values_.data() + i * dim_, dim_};
  }
  /// Right end of segment i: the next knot time, or the horizon.
  double segment_end(std::size_t i) const {
    return i + 1 < times_.size() ? times_[i + 1] : horizon_;
  }
  const std::vector<double>& times() const { return times_; }
  /// All knot values, knot-major.
  const std::vector<double>& values() const { return values_; }

  /// x(t) for t in [0, horizon].
  Vec eval(double t) const;
  /// x(t-) for t in (0, horizon].
  Vec left_limit(double t) const;
  /// Scalar shortcuts for dim == 1.
  double eval1(double t) const;
  double left_limit1(double t) const;

  /// Left limit at the right end of segment i.
  Vec segment_end_value(std::size_t i) const;
  /// True when x jumps at knot i (i >= 1).
  bool jumps_at(std::size_t i) const;
  bool segment_constant(std::size_t i) const { return modes_[i] == Segment::hold; }

  std::vector<JumpRecord> discontinuities() const;
  bool is_discontinuity(double t) const;

  /// G(eps): jumps with magnitude >= eps and time <= until, ascending.
  std::vector<JumpRecord> large_jumps(double eps, double until) const;

  /// True iff x takes a single value on the open interval (a, b).
  bool is_constant_on(double a, double b) const;

  /// The same path on [0, new_horizon].
  CadlagPath restrict(double new_horizon) const;

  /// Knot list that reproduces this path through the Knot constructor.
  std::vector<Knot> knots() const;

  /// Index of the segment containing t: largest i with t_i <= t.
  std::size_t segment_index(double t) const;

  friend bool operator==(const CadlagPath&, const CadlagPath&) = default;

 private:
  void validate_and_normalize();
  void segment_value_into(std::size_t i, double t, double* out) const;
  double segment_value1(std::size_t i, double t) const;

  std::size_t dim_ = 1;
  double horizon_ = 0.0;
  std::vector<double> times_;
  std::vector<double> values_;
  std::vector<Segment> modes_;
  std::vector<double> anchor_times_;
  std::vector<double> anchor_values_;
};

/// eta_x(t) = sup{s < t : x(s) != x(t)}, with sup of the empty set taken as 0.
double eta(const CadlagPath& x, double t);

/// theta_x(t) = inf{s >= t : x(s) != x(t-)}, with x(0-) = x(0) and
/// kInfinity when no such s exists in [0, horizon].
double theta(const CadlagPath& x, double t);

}  // namespace ctrw
