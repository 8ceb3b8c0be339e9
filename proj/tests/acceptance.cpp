// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "ctrwlab/lab.hpp"

using namespace ctrw;

namespace {

int failures = 0;

struct Outcome {
  bool ok = false;
  std::string detail;
};

void criterion(int id, const char* name, double budget, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool ok = o.ok && s < budget;
  failures += !ok;
  std::printf("%s criterion %d (%s): %.2f s of %.0f s; %s\n", ok ? "PASS" : "FAIL", id, name, s, budget,
              o.detail.c_str());
  std::fflush(stdout);
}

Outcome from_suite(const SuiteResult& r) {
  std::string d = std::to_string(r.cases) + " cases, " + std::to_string(r.checks) + " checks, " +
                  std::to_string(r.failures) + " failures";
  if (!r.passed()) d += " (" + r.first_failure + ")";
  return {r.passed(), d};
}

}  // namespace

int main() {
  const std::uint64_t seed = 1;

  criterion(1, "eta/theta biconditionals", 10, [&] { return from_suite(eta_theta_suite(seed, 1000)); });
  criterion(2, "stair set of f", 10, [&] { return from_suite(stair_set_suite(seed, 1000)); });
  criterion(3, "inverse of composed equals phi(y, y)", 30, [&] { return from_suite(inverse_suite(seed, 1000)); });
  criterion(4, "renewal identities", 30, [&] { return from_suite(renewal_identity_suite(seed, 200)); });

  criterion(5, "example 1", 60, [] {
    const auto r = run_example1({0.2, 0.1, 0.05}, 128);
    double worst_upper = 0, least_lower = 1;
    for (const auto& row : r.rows) {
      worst_upper = std::max(worst_upper, row.fxn_x.upper * row.n);
      if (row.n >= 4) least_lower = std::min(least_lower, row.fxn_e.lower);
    }
    std::string certs;
    for (const auto& c : r.certificates) {
      char buf[96];
      std::snprintf(buf, sizeof buf, " %s->%s@%g:%s", c.sequence.c_str(), c.target.c_str(), c.eps,
                    c.found ? (c.verified ? "verified" : "unverified") : "none");
      certs += buf;
    }
    char d[160];
    std::snprintf(d, sizeof d, "max n*upper(f(x_n),x) %.4f, min lower(f(x_n),e) %.4f;", worst_upper, least_lower);
    return Outcome{r.passed(), d + certs};
  });

  criterion(6, "stair sequences converge", 60, [] {
    const auto r = run_stair_sequences({4, 8, 16, 32, 64, 128, 256});
    std::string d;
    for (const auto& row : r.rows)
      if (row.n == 256) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%s upper %.5f; ", row.family.c_str(), row.fxn_fx.upper);
        d += buf;
      }
    return Outcome{r.passed(), d};
  });

  criterion(7, "marginal KS convergence", 1200, [&] {
    auto c = ExperimentConfig::from_map({{"jump_dist", "gaussian"},
                                         {"wait_dist", "pareto"},
                                         {"beta", "0.7"},
                                         {"jump_scale_exponent", "0.5"},
                                         {"wait_scale_exponent", "1.4285714285714286"},
                                         {"n_values", "100,1000,10000"},
                                         {"replicates", "10000"},
                                         {"eval_times", "0.5,1"},
                                         {"limit.mesh", "0.001"}});
    c.seed = seed;
    const auto r = run_marginal_convergence(c);
    std::string d;
    for (const auto& row : r.rows) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "KS(n=%zu,t=%g)=%.4f ", row.n, row.t, row.ks);
      d += buf;
    }
    char tail[96];
    std::snprintf(tail, sizeof tail, "critical %.4f; decreasing t=0.5:%s t=1:%s", r.rows.back().critical,
                  r.decreasing.at(0) ? "yes" : "no", r.decreasing.at(1) ? "yes" : "no");
    return Outcome{r.passed(), d + tail};
  });

  criterion(8, "metric sanity", 60, [&] { return from_suite(metric_sanity_suite(seed, 500)); });

  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
