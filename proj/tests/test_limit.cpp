#include <cmath>

#include "doctest.h"

#include "ctrwlab/limit.hpp"

using namespace ctrw;

TEST_CASE("limit pair sampling") {
  LimitModel m;
  m.beta = 0.7;
  m.mesh = 1e-2;
  m.horizon = 1.0;
  const auto p = sample_limit_pair(m, 3);
  const auto& d = p.d.path();
  for (std::size_t i = 1; i < d.size(); ++i) CHECK(d.value(i)[0] > d.value(i - 1)[0]);
  CHECK(d.value(d.size() - 2)[0] > 1.0);
  CHECK_FALSE(d.value(d.size() - 3)[0] > 1.0);
  CHECK(p.a.horizon() == d.horizon());
  const auto q = sample_limit_pair(m, 3);
  CHECK(q.a == p.a);
  CHECK(q.d.path() == p.d.path());

  LimitModel drift = m;
  drift.d_kind = DKind::linear_drift;
  drift.d_drift = 1.0;
  const auto r = sample_limit_pair(drift, 3);
  CHECK(r.d.path().size() == 1);
  CHECK(r.d.top() == r.d.horizon());

  LimitModel bad = m;
  bad.beta = 1.0;
  CHECK_THROWS_AS(sample_limit_pair(bad, 0), DomainError);
}

TEST_CASE("identity subordinator leaves A unchanged") {
  LimitModel m;
  m.d_kind = DKind::linear_drift;
  m.mesh = 1e-2;
  m.horizon = 1.0;
  const auto p = sample_limit_pair(m, 8);
  const auto r = limit_ctrw(p.a, p.d, 1.0);
  CHECK(r == p.a.restrict(1.0));
  for (int k = 0; k <= 1000; ++k) {
    const double t = k / 1000.0;
    CHECK(r.eval1(t) == p.a.eval1(t));
  }
}

TEST_CASE("single-jump subordinator") {
  // A(t) = t on [0, 1), then 3 - (t - 1); D(t) = t, plus a jump of 0.5 at 1.
  const CadlagPath a(1, 3, {{0, {0}, Segment::linear, 1.0, {1}}, {1, {3}, Segment::linear, 3.0, {1}}});
  const MonotonePath d(CadlagPath(1, 3, {{0, {0}, Segment::linear, 1.0, {1}}, {1, {1.5}, Segment::linear, 3.0, {3.5}}}));
  const auto r = limit_ctrw(a, d, 3.0);
  CHECK(r.eval1(0.5) == 0.5);
  CHECK(r.is_constant_on(1.0, 1.5));
  CHECK(r.eval1(1.2) == 1.0);
  CHECK(r.left_limit1(1.5) == 1.0);
  CHECK(r.eval1(1.5) == 3.0);
  CHECK(r.eval1(2.5) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(eta(r, 1.2) == 1.0);
  CHECK(theta(r, 1.2) == 1.5);

  const auto bar = limit_cpctrw(a, d, 3.0);
  CHECK(bar.eval1(1.0) == 1.0);
  CHECK(bar.eval1(1.25) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(bar.eval1(1.5) == 3.0);
  CHECK(bar.discontinuities().empty());
  CHECK_THROWS_AS(limit_ctrw(a, d, 3.5), DomainError);
}

TEST_CASE("gap interpolation law on grid paths") {
  LimitModel m;
  m.beta = 0.6;
  m.mesh = 5e-3;
  m.horizon = 1.0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto p = sample_limit_pair(m, 77, s);
    const auto r = limit_ctrw(p.a, p.d, 1.0);
    const auto bar = limit_cpctrw(p.a, p.d, 1.0);
    const auto& d = p.d.path();
    for (std::size_t i = 1; i < d.size(); ++i) {
      const double lo = d.value(i - 1)[0], hi = d.value(i)[0];
      if (hi > 1.0) break;
      const double a_left = p.a.value(i - 1)[0], a_right = p.a.value(i)[0];
      CHECK(bar.eval1(lo) == doctest::Approx(a_left).epsilon(1e-12));
      CHECK(bar.eval1(hi) == doctest::Approx(a_right).epsilon(1e-12));
      const double mid = 0.5 * (lo + hi);
      CHECK(bar.eval1(mid) == doctest::Approx(0.5 * (a_left + a_right)).epsilon(1e-10));
      if (mid > lo && mid < hi) {
        CHECK(eta(r, mid) == lo);
        CHECK(theta(r, mid) == hi);
      }
    }
    CHECK(bar.discontinuities().empty());
  }
}

TEST_CASE("drift limits converge with the mesh") {
  LimitModel m;
  m.a_kind = AKind::drift;
  m.a_drift = 1.0;
  m.d_kind = DKind::linear_drift;
  m.d_drift = 2.0;
  m.horizon = 1.0;
  double prev = 1;
  for (double mesh : {0.1, 0.05, 0.025, 0.0125}) {
    m.mesh = mesh;
    const auto p = sample_limit_pair(m, 0);
    const auto r = limit_ctrw(p.a, p.d, 1.0);
    double err = 0;
    for (int k = 0; k <= 100; ++k) err = std::max(err, std::abs(r.eval1(k / 100.0) - k / 200.0));
    CHECK(err <= mesh + 1e-12);
    CHECK(err <= prev);
    prev = err;
  }
}
