#include <random>
#include <sstream>

#include "doctest.h"

#include "ctrwlab/path.hpp"
#include "ctrwlab/path_io.hpp"

using namespace ctrw;

namespace {

CadlagPath p1() { return CadlagPath::step(4.0, {{0, 0}, {1, 5}, {3, 2}}); }

// Definition-level oracles for hold paths: the set {s < t : x(s) != c} is a
// union of half-open knot intervals, so sup and inf are read off directly.
double eta_oracle(const CadlagPath& x, double t) {
  const double c = x.eval1(t);
  double sup = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x.time(i) >= t || x.value(i)[0] == c) continue;
    sup = std::max(sup, std::min(x.segment_end(i), t));
  }
  return sup;
}

double theta_oracle(const CadlagPath& x, double t) {
  const double c = t > 0 ? x.left_limit1(t) : x.eval1(0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const bool reaches = i + 1 < x.size() ? x.segment_end(i) > t : true;
    if (!reaches || x.value(i)[0] == c) continue;
    return std::max(x.time(i), t);
  }
  return kInfinity;
}

CadlagPath random_step(std::mt19937_64& g, int knots) {
  std::uniform_real_distribution<double> gap(0.1, 1.0);
  std::uniform_int_distribution<int> level(-2, 2);
  std::vector<std::pair<double, double>> ks{{0.0, double(level(g))}};
  double t = 0;
  for (int i = 1; i < knots; ++i) ks.emplace_back(t += gap(g), double(level(g)));
  return CadlagPath::step(t + gap(g), ks);
}

}  // namespace

TEST_CASE("evaluation and left limits of a step path") {
  const auto x = p1();
  CHECK(x.eval1(2) == 5);
  CHECK(x.eval1(1) == 5);
  CHECK(x.eval1(0) == 0);
  CHECK(x.eval1(4) == 2);
  CHECK(x.left_limit1(1) == 0);
  CHECK(x.left_limit1(2) == 5);
  CHECK(x.left_limit1(3) == 5);
  CHECK_THROWS_AS(x.eval(4.5), DomainError);
  CHECK_THROWS_AS(x.eval(-1), DomainError);
  CHECK_THROWS_AS(x.left_limit(0), DomainError);
}

TEST_CASE("discontinuities and large jumps") {
  const auto x = p1();
  const auto d = x.discontinuities();
  REQUIRE(d.size() == 2);
  CHECK(d[0].time == 1);
  CHECK(d[0].left_value == Vec{0});
  CHECK(d[0].right_value == Vec{5});
  CHECK(d[0].magnitude == 5);
  CHECK(d[1].time == 3);
  CHECK(d[1].magnitude == 3);

  CHECK(CadlagPath::step(2, {{0, 1}}).discontinuities().empty());
  const CadlagPath ramp(1, 2, {{0, {0}, Segment::linear}, {1, {1}, Segment::linear, 2.0, {3}}});
  CHECK(ramp.discontinuities().empty());

  const auto big = x.large_jumps(4, 4);
  REQUIRE(big.size() == 1);
  CHECK(big[0].time == 1);
  CHECK(x.large_jumps(6, 4).empty());
  CHECK(x.large_jumps(0.5, 4).size() == 2);
  CHECK(x.large_jumps(0.5, 2).size() == 1);
  CHECK_THROWS_AS(x.large_jumps(0, 4), DomainError);

  const CadlagPath rebuilt(x.dim(), x.horizon(), x.knots());
  const auto d2 = rebuilt.discontinuities();
  REQUIRE(d2.size() == d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(d2[i].time == d[i].time);
    CHECK(d2[i].left_value == d[i].left_value);
    CHECK(d2[i].right_value == d[i].right_value);
  }
}

TEST_CASE("eta and theta on the reference step path") {
  const auto x = p1();
  CHECK(eta(x, 2) == 1);
  CHECK(eta(x, 1) == 1);
  CHECK(eta(x, 0.5) == 0);
  CHECK(theta(x, 2) == 3);
  CHECK(theta(x, 0.5) == 1);
  CHECK(theta(x, 3.5) == kInfinity);
  CHECK(theta(x, 1) == 1);
  CHECK(theta(x, 0) == 1);
}

TEST_CASE("eta and theta agree with the definition on random step paths") {
  std::mt19937_64 g(11);
  for (int rep = 0; rep < 200; ++rep) {
    const auto x = random_step(g, 2 + rep % 20);
    for (int k = 0; k <= 200; ++k) {
      const double t = std::min(x.horizon(), x.horizon() * k / 200.0);
      CHECK(eta(x, t) == eta_oracle(x, t));
      CHECK(theta(x, t) == theta_oracle(x, t));
    }
    for (double t : x.times()) {
      CHECK(eta(x, t) == eta_oracle(x, t));
      CHECK(theta(x, t) == theta_oracle(x, t));
    }
  }
}

TEST_CASE("constancy on intervals") {
  const auto x = p1();
  CHECK(x.is_constant_on(1, 3));
  CHECK_FALSE(x.is_constant_on(0.5, 1.5));
  CHECK(x.is_constant_on(1.2, 1.7));
  CHECK(x.is_constant_on(0, 1));
  CHECK_FALSE(x.is_constant_on(0, 3.5));
  CHECK_THROWS_AS(x.is_constant_on(2, 2), DomainError);
  const CadlagPath ramp(1, 2, {{0, {0}, Segment::linear}, {1, {1}, Segment::hold}});
  CHECK_FALSE(ramp.is_constant_on(0.2, 0.3));
  CHECK(ramp.is_constant_on(1, 2));
}

TEST_CASE("linear segments with explicit anchors") {
  // Ramp from 0 toward (2, 4) that is cut at t = 1 by a jump to 7.
  const CadlagPath x(1, 3, {{0, {0}, Segment::linear, 2.0, {4}}, {1, {7}, Segment::hold}});
  CHECK(x.eval1(0.5) == 1.0);
  CHECK(x.left_limit1(1) == 2.0);
  CHECK(x.eval1(1) == 7);
  CHECK(x.is_discontinuity(1));
  CHECK(x.discontinuities()[0].magnitude == 5);

  const auto r = x.restrict(0.5);
  CHECK(r.horizon() == 0.5);
  CHECK(r.eval1(0.5) == 1.0);
  CHECK(r.eval1(0.25) == x.eval1(0.25));

  CHECK_THROWS_AS(CadlagPath(1, 3, {{0, {0}, Segment::linear, 0.5, {4}}, {1, {7}, Segment::hold}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(CadlagPath::step(1, {{0.5, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(CadlagPath::step(1, {{0, 1}, {2, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(CadlagPath::step(3, {{0, 1}, {2, 1}, {1, 0}}), std::invalid_argument);
}

TEST_CASE("multi-dimensional paths use the sup norm") {
  const CadlagPath x(2, 2, {{0, {0, 0}, Segment::hold}, {1, {1, -3}, Segment::hold}});
  const auto d = x.discontinuities();
  REQUIRE(d.size() == 1);
  CHECK(d[0].magnitude == 3);
  CHECK(x.eval(1.5) == Vec{1, -3});
}

TEST_CASE("json round trip and csv export") {
  // A final linear knot needs an anchor unless it sits at the horizon.
  CHECK_THROWS_AS(CadlagPath(1, 3, {{0, {0}, Segment::hold}, {2, {1}, Segment::linear}}), std::invalid_argument);

  const CadlagPath y(1, 3, {{0, {0}, Segment::linear, 2.0, {4}}, {1, {7}, Segment::linear}, {3, {1}, Segment::hold}});
  CHECK(path_from_json(to_json(y)) == y);
  CHECK(path_from_json(nlohmann::json::parse(to_json(p1()).dump())) == p1());

  std::ostringstream os;
  write_csv(os, p1(), 1.5);
  CHECK(os.str() == "t,v1\n0,0\n1.5,5\n3,2\n4,2\n");
  CHECK_THROWS_AS(path_from_json(nlohmann::json::parse(R"({"dim":1,"horizon":1,"knots":[[0,[1],"jump"]]})")),
                  std::invalid_argument);
}
