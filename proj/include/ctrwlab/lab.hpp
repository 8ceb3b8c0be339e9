#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "ctrwlab/ctrw.hpp"
#include "ctrwlab/limit.hpp"
#include "ctrwlab/metrics.hpp"
#include "ctrwlab/rng.hpp"

namespace ctrw {

inline constexpr const char* kVersion = "0.1.0";

/// Two-sample Kolmogorov-Smirnov statistic sup |F1 - F2|.
double ks_statistic(std::vector<double> a, std::vector<double> b);

/// Asymptotic two-sample critical value c(level) sqrt((n1 + n2) / (n1 n2))
/// with c(level) = sqrt(-ln(level / 2) / 2); about 1.6276 at level 0.01.
double ks_critical_value(std::size_t n1, std::size_t n2, double level = 0.01);

/// Calls body(i) for every i < count on up to `threads` workers (0 picks
/// the hardware count). The first exception thrown by a body is rethrown.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

/// Stream of replicate r at scale n. Limit replicates use n = 0.
inline std::uint64_t replicate_stream(std::size_t n, std::size_t r) {
  return (static_cast<std::uint64_t>(n) << 32) | static_cast<std::uint64_t>(r);
}

/// Limit pair matching a CTRW model's scaling: Brownian or stable A for
/// gaussian or stable jumps, a stable subordinator for heavy-tailed waits and
/// a linear drift (the mean wait) otherwise.
LimitModel default_limit_for(const CtrwModel& model);

struct ExperimentConfig {
  CtrwModel model;
  LimitModel limit;
  std::vector<std::size_t> n_values{100, 1000, 10000};
  std::size_t replicates = 10000;
  std::vector<double> eval_times{0.5, 1.0};
  std::uint64_t seed = 1;
  std::string output_dir = ".";
  /// Worker threads; 0 uses the hardware count.
  unsigned threads = 0;

  /// Keys as in the config file; limit keys carry a "limit." prefix. Keys
  /// left out take CtrwModel defaults and default_limit_for(model).
  /// Throws std::invalid_argument on unknown keys or malformed values.
  static ExperimentConfig from_map(const std::map<std::string, std::string>& kv);
  double horizon() const;
  void validate() const;
  nlohmann::json to_json() const;
};

/// Replicate paths of one process plus their values at fixed times.
struct PathEnsemble {
  std::string process;  // ctrw | octrw | cpctrw | limit
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double horizon = 0.0;
  std::vector<CadlagPath> paths;
  std::vector<double> times;
  /// marginals[i][r]: first coordinate of replicate r at times[i].
  std::vector<std::vector<double>> marginals;
};

/// Replicate r uses stream replicate_stream(n, r).
PathEnsemble simulate_ensemble(const ExperimentConfig& config, std::size_t n, const std::string& process,
                               bool keep_paths = true);
/// f(Phi(A, D)) replicates on streams replicate_stream(0, r).
PathEnsemble simulate_limit_ensemble(const ExperimentConfig& config, bool keep_paths = true);

void write_ensemble_lines(std::ostream& os, const PathEnsemble& e);
/// "replicate,t,value" rows.
void write_marginals_csv(std::ostream& os, const PathEnsemble& e);

struct KsRow {
  std::size_t n = 0;
  double t = 0.0;
  double ks = 0.0;
  double critical = 0.0;
};

struct ConvergenceReport {
  ExperimentConfig config;
  std::vector<KsRow> rows;
  /// Per evaluation time: KS strictly decreasing along n_values.
  std::vector<bool> decreasing;
  /// Per evaluation time: share of positive reference values and whether
  /// the sign test accepts symmetry at the 1% level.
  std::vector<double> reference_positive_share;
  std::vector<bool> reference_symmetric;
  /// Per evaluation time: KS between the reference and an independent
  /// reference on twice the mesh.
  std::vector<double> mesh_sensitivity;

  /// Decreasing at every time and below the critical value at the largest n.
  bool passed() const;
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

ConvergenceReport run_marginal_convergence(const ExperimentConfig& config);

/// x = t off [1, 2), 1 on [1, 2), on [0, 3].
CadlagPath example1_x();
/// x_n: like x, but on [1, 2) equal to 1 until 2 - 1/n and 1 + 1/n after.
CadlagPath example1_xn(std::size_t n);
/// e(t) = t on [0, horizon].
CadlagPath identity_path(double horizon);

struct Example1Row {
  std::size_t n = 0;
  Bracket xn_x, fxn_x, fxn_e;
  double uniform_xn_x = 0.0;
};

struct CertificateOutcome {
  std::string sequence;
  std::string target;
  double eps = 0.0;
  bool found = false;
  bool verified = false;
  std::size_t n1 = 0;
};

struct Example1Report {
  double mesh = 0.0;
  std::size_t n_max = 0;
  std::vector<Example1Row> rows;
  std::vector<CertificateOutcome> certificates;

  /// Every expected outcome: (f(x_n), x) upper <= 2/n, (f(x_n), e) lower
  /// >= 1/4 for n >= 4, no certificate for f(x_n) -> e at eps = 0.2 and a
  /// verified one for x_n -> x at every eps.
  bool passed() const;
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

Example1Report run_example1(const std::vector<double>& eps_list, std::size_t n_max, double mesh = 1e-4);

/// A sequence x_n -> x in J1 whose stairs satisfy the convergence conditions
/// on eta, theta and the closing jump.
struct SequenceFamily {
  std::string name;
  double horizon = 0.0;
  CadlagPath limit;
  std::function<CadlagPath(std::size_t)> term;
  /// Interior times of the stairs of the limit.
  std::vector<double> stair_times;
};

std::vector<SequenceFamily> stair_sequence_families();

struct StairSequenceRow {
  std::string family;
  std::size_t n = 0;
  Bracket fxn_fx;
  double eta_error = 0.0;
  double theta_error = 0.0;
  double jump_error = 0.0;
};

struct StairSequenceReport {
  double mesh = 0.0;
  std::vector<StairSequenceRow> rows;
  /// Per family: uppers nonincreasing up to mesh and the last below 0.02.
  std::map<std::string, bool> trending;
  bool passed() const;
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

StairSequenceReport run_stair_sequences(const std::vector<std::size_t>& ns, double mesh = 1e-4);

/// Scalar hold path with 'knots' knots on [0, horizon]; values come from a
/// small lattice so neighbouring knots often repeat a value.
CadlagPath random_step_path(Rng& rng, std::size_t knots, double horizon);
/// Nondecreasing hold path with y(0) = 0; some increments are zero.
CadlagPath random_monotone_step(Rng& rng, std::size_t knots);
/// Scalar path mixing hold and linear segments, continuous at the horizon.
CadlagPath random_mixed_path(Rng& rng, std::size_t knots, double horizon);

/// Replaceable pieces, for checking that the suites catch broken code.
struct SuiteHooks {
  std::function<CadlagPath(const CadlagPath&)> fill = [](const CadlagPath& x) { return stair_fill(x); };
  std::function<std::size_t(const MonotonePath&, std::size_t, double)> counting = counting_process;
};

/// "stairfill-skip-first" or "counting-off-by-one"; "" gives the real hooks.
SuiteHooks mutant_hooks(const std::string& name);

struct SuiteResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string first_failure;
  double seconds = 0.0;
  bool passed() const { return failures == 0; }
};

SuiteResult eta_theta_suite(std::uint64_t seed, std::size_t cases);
SuiteResult stair_set_suite(std::uint64_t seed, std::size_t cases, const SuiteHooks& hooks = {});
SuiteResult inverse_suite(std::uint64_t seed, std::size_t cases);
SuiteResult renewal_identity_suite(std::uint64_t seed, std::size_t models, const SuiteHooks& hooks = {});
SuiteResult metric_sanity_suite(std::uint64_t seed, std::size_t pairs);

struct PropertyReport {
  std::uint64_t seed = 0;
  std::size_t cases = 0;
  std::string mutant;
  std::vector<SuiteResult> suites;

  bool passed() const;
  /// Timings are left out unless asked for, so reports repeat byte for byte.
  nlohmann::json to_json(bool with_timing = false) const;
};

/// Runs every suite. `cases` sizes the path suites; the renewal suite uses
/// cases / 5 models and the metric suite cases / 2 pairs.
PropertyReport run_property_suites(std::uint64_t seed, std::size_t cases, const std::string& mutant = "");

}  // namespace ctrw
