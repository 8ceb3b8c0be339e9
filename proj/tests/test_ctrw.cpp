#include <cmath>
#include <random>

#include "doctest.h"

#include "ctrwlab/ctrw.hpp"
#include "ctrwlab/rng.hpp"

using namespace ctrw;

namespace {

// Renewal pair from explicit jumps and waits, n = 1.
RenewalPair pair_from(const std::vector<double>& ys, const std::vector<double>& js) {
  std::vector<std::pair<double, double>> s{{0, 0}}, t{{0, 0}};
  double sv = 0, tv = 0;
  for (std::size_t k = 0; k < ys.size(); ++k) {
    s.emplace_back(k + 1.0, sv += ys[k]);
    t.emplace_back(k + 1.0, tv += js[k]);
  }
  const double h = static_cast<double>(ys.size());
  return {CadlagPath::step(h, s), MonotonePath(CadlagPath::step(h, t)), 1, ys.size()};
}

CtrwModel unit_model() {
  CtrwModel m;
  m.jump_dist = JumpDist::deterministic;
  m.wait_dist = WaitDist::deterministic;
  return m;
}

}  // namespace

TEST_CASE("renewal generation") {
  const auto p = sample_renewal_pair(unit_model(), 1, 3, 1);
  CHECK(p.renewal_count == 4);
  CHECK(p.t_path.path() == CadlagPath::step(4, {{0, 0}, {1, 1}, {2, 2}, {3, 3}, {4, 4}}));
  for (int k = 0; k <= 4; ++k) CHECK(p.s_path.eval1(k) == k);
  CHECK(p.last_renewal() == 4);

  CtrwModel scaled = unit_model();
  scaled.wait_scale_exponent = 1.0;
  scaled.jump_scale_exponent = 0.5;
  const auto q = sample_renewal_pair(scaled, 4, 1, 1);
  CHECK(q.renewal_count == 5);
  CHECK(q.s_path.eval1(1.0) == 4 * 0.5);
  CHECK(q.t_path.eval(0.5) == 0.5);

  CtrwModel g;
  g.wait_dist = WaitDist::pareto;
  g.beta = 0.7;
  g.wait_scale_exponent = 1 / 0.7;
  const auto a = sample_renewal_pair(g, 100, 1, 42, 3);
  const auto b = sample_renewal_pair(g, 100, 1, 42, 3);
  CHECK(a.s_path == b.s_path);
  CHECK(a.t_path.path() == b.t_path.path());
  CHECK(a.last_renewal() > 1);
  CHECK_FALSE(sample_renewal_pair(g, 100, 1, 42, 4).s_path == a.s_path);

  CtrwModel tiny = unit_model();
  tiny.wait_value = 1e-3;
  tiny.max_renewals = 100;
  CHECK_THROWS_AS(sample_renewal_pair(tiny, 1, 1, 0), GenerationOverflow);
  CtrwModel bad = unit_model();
  bad.wait_scale_exponent = 0;
  CHECK_THROWS_AS(sample_renewal_pair(bad, 1, 1, 0), std::invalid_argument);
}

TEST_CASE("counting process") {
  const auto p = pair_from({1, 1, 1}, {0.5, 1.5, 1.0});
  CHECK(counting_process(p.t_path, 1, 2.0) == 2);
  CHECK(counting_process(p.t_path, 1, 0.4) == 0);
  CHECK(counting_process(p.t_path, 1, 0.5) == 1);
  CHECK(counting_process(p.t_path, 1, 3.0) == 3);
  for (int k = 0; k <= 3; ++k) CHECK(counting_process(p.t_path, 1, p.t_path.eval(k)) == static_cast<std::size_t>(k));
  CHECK_THROWS_AS(counting_process(p.t_path, 1, 3.5), DomainError);

  CtrwModel m;
  m.wait_dist = WaitDist::exponential;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto r = sample_renewal_pair(m, 7, 2, s);
    for (std::size_t k = 0; k <= r.renewal_count; ++k) {
      const double tk = r.t_path.eval(k / 7.0);
      CHECK(counting_process(r.t_path, 7, tk) == k);
    }
  }
}

TEST_CASE("ctrw, overshooting and interpolated paths") {
  const auto p = pair_from({1, -2, 3}, {0.5, 1.5, 1.0});
  const auto r = ctrw_path(p, 2.0);
  CHECK(r.eval1(1) == 1);
  CHECK(r.eval1(0.25) == 0);
  CHECK(r.eval1(2.0) == -1);

  const auto o = octrw_path(p, 1.5);
  CHECK(o.eval1(0.25) == 1);
  CHECK(o.eval1(1.0) == -1);

  const auto c = cpctrw_path(p, 1.5);
  CHECK(c.eval1(0.25) == 0.5);
  CHECK(c.eval1(1.25) == 0);
  CHECK(c.eval1(0.5) == 1);
  CHECK(c.discontinuities().empty());
  CHECK(c == stair_fill(ctrw_path(p, 3.0)).restrict(1.5));
  // Filling after truncation leaves the last stair open.
  CHECK(stair_fill(ctrw_path(p, 1.5)).eval1(1.25) == 1);

  CHECK_THROWS_AS(octrw_path(p, 3.0), DomainError);
  CHECK_THROWS_AS(cpctrw_path(p, 3.0), DomainError);
  CHECK_NOTHROW(ctrw_path(p, 3.0));

  // With a zero jump the overshooting walk agrees with the plain one there.
  const auto z = pair_from({1, 0, 3}, {0.5, 1.5, 1.0});
  CHECK(octrw_path(z, 1.5).eval1(1.0) == ctrw_path(z, 1.5).eval1(1.0));
}

TEST_CASE("ctrw structural identities on random models") {
  std::mt19937_64 g(11);
  std::uniform_real_distribution<double> u(0, 1);
  for (int rep = 0; rep < 40; ++rep) {
    CtrwModel m;
    m.wait_dist = rep % 2 ? WaitDist::pareto : WaitDist::exponential;
    m.beta = 0.7;
    m.wait_scale_exponent = rep % 2 ? 1 / 0.7 : 1.0;
    const std::size_t n = 5 + rep;
    const double h = 1.0;
    const auto pair = sample_renewal_pair(m, n, h, 99, rep);
    const auto r = ctrw_path(pair, h);
    const auto bar = cpctrw_path(pair, h);
    CHECK(bar == stair_fill(ctrw_path(pair, pair.last_renewal())).restrict(h));
    CHECK(r == phi(pair.s_path, pair.t_path).restrict(h));
    for (int k = 0; k < 50; ++k) {
      const double t = h * u(g);
      const std::size_t nt = counting_process(pair.t_path, n, t);
      const double lo = pair.t_path.eval(nt / static_cast<double>(n));
      const double hi = pair.t_path.eval((nt + 1) / static_cast<double>(n));
      CHECK(eta(r, t) == lo);
      CHECK(theta(r, t) == (hi <= h ? hi : kInfinity));
      CHECK(counting_process(pair.t_path, n, lo) == nt);
      CHECK(counting_process(pair.t_path, n, hi) == nt + 1);
    }
  }
}

TEST_CASE("samplers") {
  Rng a(5, 0), b(5, 0), c(5, 1);
  CHECK(a.next_u64() == b.next_u64());
  CHECK_FALSE(Rng(5, 0).next_u64() == c.next_u64());

  Rng rng(123, 0);
  const int n = 200000;
  double mean = 0, var = 0, tail = 0, lap = 0, cosm = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u > 0);
    REQUIRE(u < 1);
    const double z = rng.normal();
    mean += z;
    var += z * z;
    tail += sample_pareto(rng, 1.5) > 2.0;
    lap += std::exp(-sample_one_sided_stable(rng, 0.7));
    cosm += std::cos(sample_symmetric_stable(rng, 1.2));
  }
  CHECK(std::abs(mean / n) < 0.01);
  CHECK(std::abs(var / n - 1) < 0.02);
  CHECK(std::abs(tail / n - std::pow(2.0, -1.5)) < 0.005);
  CHECK(std::abs(lap / n - std::exp(-1.0)) < 0.005);
  CHECK(std::abs(cosm / n - std::exp(-1.0)) < 0.01);
}
