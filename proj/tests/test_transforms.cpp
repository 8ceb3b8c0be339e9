#include <cmath>
#include <random>

#include "doctest.h"

#include "ctrwlab/transforms.hpp"

using namespace ctrw;

namespace {

CadlagPath p1() { return CadlagPath::step(4.0, {{0, 0}, {1, 5}, {3, 2}}); }

// y = 2 floor(s) on [0, 3].
MonotonePath two_floor() { return MonotonePath(CadlagPath::step(3, {{0, 0}, {1, 2}, {2, 4}, {3, 6}})); }

CadlagPath example1_x() {
  return CadlagPath(1, 3, {{0, {0}, Segment::linear}, {1, {1}, Segment::hold}, {2, {2}, Segment::linear, 3.0, {3}}});
}

// inf{s > 0 : y(s) > t} for a hold-mode y, read from the knot intervals.
double inverse_oracle(const CadlagPath& y, double t) {
  for (std::size_t i = 0; i < y.size(); ++i)
    if (y.value(i)[0] > t) return y.time(i);
  return y.horizon();
}

CadlagPath random_increasing_step(std::mt19937_64& g, int knots) {
  std::uniform_real_distribution<double> gap(0.05, 1.0);
  std::uniform_int_distribution<int> rise(1, 4);
  std::vector<std::pair<double, double>> ks{{0.0, 0.0}};
  double t = 0, v = 0;
  for (int i = 1; i < knots; ++i) ks.emplace_back(t += gap(g), v += 0.5 * rise(g));
  return CadlagPath::step(t + gap(g), ks);
}

}  // namespace

TEST_CASE("stair filling of the reference step path") {
  const auto f = stair_fill(p1());
  CHECK(f.eval1(2) == 3.5);
  CHECK(f.eval1(0.5) == 2.5);
  CHECK(f.eval1(1) == 5);
  CHECK(f.eval1(3) == 2);
  CHECK(f.eval1(3.7) == 2);  // final plateau has no closing jump
  CHECK(f.discontinuities().empty());
  for (int k = 0; k <= 400; ++k) {
    const double t = 4.0 * k / 400;
    CHECK(f.eval1(t) == doctest::Approx(stair_fill_at(p1(), t)[0]).epsilon(1e-14));
  }
  // Pointwise formula by hand at the midpoints of the two stairs.
  CHECK(stair_fill_at(p1(), 2)[0] == 3.5);
  CHECK(stair_fill_at(p1(), 0.5)[0] == 2.5);
}

TEST_CASE("stair filling maps the Example 1 path to the identity") {
  const auto f = stair_fill(example1_x());
  for (int k = 0; k <= 300; ++k) {
    const double t = 3.0 * k / 300;
    CHECK(std::abs(f.eval1(t) - t) <= 1e-15 * 3);
  }
  CHECK(f.discontinuities().empty());
}

TEST_CASE("stair filling leaves paths without stairs unchanged") {
  const CadlagPath up(1, 2, {{0, {0}, Segment::linear}, {1, {1}, Segment::linear, 2.0, {3}}});
  CHECK(stair_fill(up) == up);
  const auto once = stair_fill(p1());
  CHECK(stair_fill(once) == once);
}

TEST_CASE("right inverse") {
  const auto y = two_floor();
  const auto inv = right_inverse(y);
  CHECK(inv.eval(1) == 1);
  CHECK(inv.eval(0) == 1);
  CHECK(inv.eval(2) == 2);
  CHECK(inv.eval(5.9) == 3);
  CHECK(inv.horizon() == 6);

  const MonotonePath line(CadlagPath(1, 4, {{0, {0}, Segment::linear, 4.0, {8}}}));
  const auto linv = right_inverse(line);
  for (double t : {0.0, 0.5, 1.25, 3.0, 7.5}) CHECK(linv.eval(t) == doctest::Approx(t / 2).epsilon(1e-15));

  std::mt19937_64 g(5);
  for (int rep = 0; rep < 100; ++rep) {
    const auto p = random_increasing_step(g, 2 + rep % 15);
    const auto pinv = right_inverse(MonotonePath(p));
    const double top = p.eval1(p.horizon());
    for (int k = 0; k < 500; ++k) {
      const double t = top * k / 500;
      CHECK(pinv.eval(t) == inverse_oracle(p, t));
    }
    for (std::size_t i = 0; i + 1 < p.size(); ++i) CHECK(pinv.eval(p.value(i)[0]) == inverse_oracle(p, p.value(i)[0]));
  }

  CHECK_THROWS_AS(MonotonePath{p1()}, DomainError);
  CHECK_THROWS_AS(MonotonePath{CadlagPath::step(1, {{0, -1}})}, DomainError);
}

TEST_CASE("left and right limit versions") {
  const auto m = left_limit_path(p1());
  CHECK(m.eval(1)[0] == 0);
  CHECK(m.eval(0)[0] == 0);
  CHECK(m.eval(3)[0] == 5);
  CHECK(m.eval(3.5)[0] == 2);
  const auto pl = right_limit_path(m);
  CHECK(pl.eval(1)[0] == 5);
  CHECK(pl.to_cadlag() == p1());

  const auto inv_left = left_limit_path(right_inverse(two_floor()).path());
  CHECK(inv_left.eval(2 + 1e-9)[0] == 2);
  CHECK(inv_left.eval(2)[0] == 1);

  const CadlagPath cont(1, 2, {{0, {1}, Segment::linear, 2.0, {3}}});
  for (double t : {0.0, 0.3, 1.0, 2.0}) {
    CHECK(left_limit_path(cont).eval(t)[0] == cont.eval1(t));
    CHECK(right_limit_path(cont).eval(t)[0] == cont.eval1(t));
  }
}

TEST_CASE("composition with a nondecreasing inner path") {
  std::mt19937_64 g(9);
  const CadlagPath outer(1, 10, {{0, {0}, Segment::linear}, {2, {3}, Segment::hold}, {5, {-1}, Segment::linear, 9.0, {1}},
                                 {7, {4}, Segment::hold}});
  for (int rep = 0; rep < 50; ++rep) {
    const auto inner = random_increasing_step(g, 3 + rep % 6);
    const double top = inner.eval1(inner.horizon());
    if (top > 10) continue;
    const auto c = compose(outer, MonotonePath(inner));
    for (int k = 0; k <= 200; ++k) {
      const double t = std::min(inner.horizon(), inner.horizon() * k / 200);
      CHECK(c.eval1(t) == doctest::Approx(outer.eval1(inner.eval1(t))).epsilon(1e-12));
    }
  }
  const MonotonePath ramp(CadlagPath(1, 1, {{0, {0}, Segment::linear, 1.0, {10}}}));
  const auto c = compose(outer, ramp);
  for (int k = 0; k <= 1000; ++k) {
    const double t = k / 1000.0;
    CHECK(c.eval1(t) == doctest::Approx(outer.eval1(std::min(10.0, 10 * t))).epsilon(1e-12));
  }
}

TEST_CASE("phi on a small renewal pair") {
  // Y = (1, -2), J = (0.5, 1.5), n = 1.
  const auto s = CadlagPath::step(2, {{0, 0}, {1, 1}, {2, -1}});
  const MonotonePath t(CadlagPath::step(2, {{0, 0}, {1, 0.5}, {2, 2.0}}));
  const auto r = phi(s, t);
  CHECK(r.eval1(1) == 1);
  CHECK(r.eval1(0.4) == 0);
  CHECK(r.eval1(0.5) == 1);
  CHECK(r.eval1(1.999) == 1);
  CHECK(r.horizon() == 2.0);

  const MonotonePath id(CadlagPath(1, 4, {{0, {0}, Segment::linear, 4.0, {4}}}));
  const auto x = phi(p1(), id);
  for (int k = 0; k < 400; ++k) {
    const double u = 4.0 * k / 400;
    CHECK(x.eval1(u) == p1().eval1(u));
  }
}

TEST_CASE("inverse of the composition equals phi(y, y)") {
  const auto y = two_floor();
  const auto lhs = inverse_of_composed(y);
  const auto rhs = phi(y.path(), y);
  CHECK(lhs.eval(1) == 0);
  CHECK(rhs.eval1(1) == 0);
  CHECK(lhs.eval(2) == 2);
  CHECK(rhs.eval1(2) == 2);

  const MonotonePath line(CadlagPath(1, 3, {{0, {0}, Segment::linear, 3.0, {6}}}));
  const auto l2 = inverse_of_composed(line);
  const auto r2 = phi(line.path(), line);
  for (int k = 0; k < 600; ++k) {
    const double t = 6.0 * k / 600;
    CHECK(l2.eval(t) == doctest::Approx(t).epsilon(1e-14));
    CHECK(r2.eval1(t) == doctest::Approx(t).epsilon(1e-14));
  }

  std::mt19937_64 g(21);
  for (int rep = 0; rep < 200; ++rep) {
    const MonotonePath p(random_increasing_step(g, 2 + rep % 25));
    const auto a = inverse_of_composed(p);
    const auto b = phi(p.path(), p);
    const double top = p.top();
    for (int k = 0; k < 300; ++k) {
      const double t = top * k / 300;
      CHECK(std::abs(a.eval(t) - b.eval1(t)) <= 1e-12);
    }
  }
}
