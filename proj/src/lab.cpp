#include "ctrwlab/lab.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "ctrwlab/path_io.hpp"
#include "ctrwlab/transforms.hpp"

namespace ctrw {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json bracket_json(const Bracket& b) { return {{"lower", b.lower}, {"upper", b.upper}}; }

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Suite-specific stream tags keep the corpora of different suites apart.
enum SuiteTag : std::uint64_t { kStepCorpus = 1, kInverseCorpus = 2, kRenewalCorpus = 3, kMetricCorpus = 4 };

Rng suite_rng(std::uint64_t seed, SuiteTag tag, std::size_t c) { return Rng(seed, (tag << 40) | c); }

std::size_t below(Rng& rng, std::size_t k) {
  return std::min(k - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(k)));
}

// Collects check outcomes for one suite.
struct Tally {
  SuiteResult result;
  void check(bool ok, const std::function<std::string()>& what) {
    ++result.checks;
    if (ok) return;
    if (result.failures++ == 0) result.first_failure = what();
  }
};

std::string at_case(std::size_t c, double t, const std::string& what) {
  return "case " + std::to_string(c) + ", t = " + fmt(t) + ": " + what;
}

// Grid k H / count for k = 1..count, knot times and midpoints between knots.
std::vector<double> probe_times(const CadlagPath& x, std::size_t count) {
  const double h = x.horizon();
  std::vector<double> ts;
  for (std::size_t k = 1; k <= count; ++k) ts.push_back(std::min(h, h * static_cast<double>(k) / count));
  for (std::size_t i = 0; i < x.size(); ++i) {
    ts.push_back(x.time(i));
    ts.push_back(0.5 * (x.time(i) + x.segment_end(i)));
  }
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  return ts;
}

CadlagPath step_corpus_path(std::uint64_t seed, std::size_t c) {
  Rng rng = suite_rng(seed, kStepCorpus, c);
  const std::size_t knots = 5 + below(rng, 46);
  const double horizon = rng.uniform(1.0, 10.0);
  return random_step_path(rng, knots, horizon);
}

}  // namespace

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("KS statistic needs two nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_critical_value(std::size_t n1, std::size_t n2, double level) {
  if (n1 == 0 || n2 == 0) throw std::invalid_argument("KS critical value needs nonempty samples");
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("KS level must lie in (0, 1)");
  const double c = std::sqrt(-std::log(level / 2.0) / 2.0);
  const double a = static_cast<double>(n1), b = static_cast<double>(n2);
  return c * std::sqrt((a + b) / (a * b));
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = count;
      }
    }
  };
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
}

// ---------------------------------------------------------------- config

LimitModel default_limit_for(const CtrwModel& model) {
  LimitModel lm;
  lm.dim = model.dim;
  switch (model.jump_dist) {
    case JumpDist::gaussian: lm.a_kind = AKind::brownian; break;
    case JumpDist::symmetric_stable:
      lm.a_kind = AKind::symmetric_stable;
      lm.alpha = model.alpha;
      break;
    case JumpDist::deterministic:
      lm.a_kind = AKind::drift;
      lm.a_drift = model.jump_value;
      break;
    case JumpDist::table: {
      double sq = 0.0;
      for (double v : model.jump_table) sq += v * v;
      lm.a_kind = AKind::brownian;
      lm.a_scale = std::sqrt(sq / static_cast<double>(std::max<std::size_t>(model.jump_table.size(), 1)));
      break;
    }
  }
  const bool heavy = (model.wait_dist == WaitDist::pareto || model.wait_dist == WaitDist::one_sided_stable) &&
                     model.beta > 0.0 && model.beta < 1.0;
  if (heavy) {
    lm.d_kind = DKind::one_sided_stable;
    lm.beta = model.beta;
    lm.d_scale = model.wait_dist == WaitDist::pareto ? std::tgamma(1.0 - model.beta) : 1.0;
  } else {
    lm.d_kind = DKind::linear_drift;
    switch (model.wait_dist) {
      case WaitDist::exponential: lm.d_drift = 1.0; break;
      case WaitDist::deterministic: lm.d_drift = model.wait_value; break;
      case WaitDist::pareto: lm.d_drift = model.beta > 1.0 ? model.beta / (model.beta - 1.0) : 1.0; break;
      case WaitDist::one_sided_stable: lm.d_drift = 1.0; break;
    }
  }
  return lm;
}

namespace {

double to_double(const std::string& key, const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': not a number: '" + s + "'");
  }
}

std::uint64_t to_u64(const std::string& key, const std::string& s) {
  try {
    std::size_t used = 0;
    if (!s.empty() && s.front() == '-') throw std::invalid_argument(s);
    const auto v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': not a nonnegative integer: '" + s + "'");
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s + ",") {
    if (ch == ',' || ch == ' ' || ch == '[' || ch == ']' || ch == '"') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\"");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\"");
  return s.substr(b, e - b + 1);
}

}  // namespace

ExperimentConfig ExperimentConfig::from_map(const std::map<std::string, std::string>& kv) {
  ExperimentConfig c;
  std::map<std::string, std::string> limit_keys;
  for (const auto& [raw_key, raw_value] : kv) {
    const std::string& key = raw_key;
    const std::string value = trim(raw_value);
    auto num = [&] { return to_double(key, value); };
    auto u64 = [&] { return to_u64(key, value); };
    if (key.rfind("limit.", 0) == 0) {
      limit_keys[key.substr(6)] = value;
    } else if (key == "dim") {
      c.model.dim = u64();
    } else if (key == "jump_dist") {
      c.model.jump_dist = parse_jump_dist(value);
    } else if (key == "wait_dist") {
      c.model.wait_dist = parse_wait_dist(value);
    } else if (key == "alpha") {
      c.model.alpha = num();
    } else if (key == "beta") {
      c.model.beta = num();
    } else if (key == "jump_value") {
      c.model.jump_value = num();
    } else if (key == "wait_value") {
      c.model.wait_value = num();
    } else if (key == "jump_table") {
      c.model.jump_table.clear();
      for (const auto& s : split_list(value)) c.model.jump_table.push_back(to_double(key, s));
    } else if (key == "jump_scale_exponent") {
      c.model.jump_scale_exponent = num();
    } else if (key == "wait_scale_exponent") {
      c.model.wait_scale_exponent = num();
    } else if (key == "max_renewals") {
      c.model.max_renewals = u64();
    } else if (key == "n" || key == "n_values") {
      c.n_values.clear();
      for (const auto& s : split_list(value)) c.n_values.push_back(to_u64(key, s));
    } else if (key == "replicates") {
      c.replicates = u64();
    } else if (key == "eval_times") {
      c.eval_times.clear();
      for (const auto& s : split_list(value)) c.eval_times.push_back(to_double(key, s));
    } else if (key == "seed") {
      c.seed = u64();
    } else if (key == "output_dir") {
      c.output_dir = value;
    } else if (key == "threads") {
      c.threads = static_cast<unsigned>(u64());
    } else {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }
  c.limit = default_limit_for(c.model);
  for (const auto& [key, value] : limit_keys) {
    const std::string full = "limit." + key;
    if (key == "a_kind") {
      c.limit.a_kind = parse_a_kind(value);
    } else if (key == "d_kind") {
      c.limit.d_kind = parse_d_kind(value);
    } else if (key == "alpha") {
      c.limit.alpha = to_double(full, value);
    } else if (key == "a_scale") {
      c.limit.a_scale = to_double(full, value);
    } else if (key == "a_drift") {
      c.limit.a_drift = to_double(full, value);
    } else if (key == "beta") {
      c.limit.beta = to_double(full, value);
    } else if (key == "d_scale") {
      c.limit.d_scale = to_double(full, value);
    } else if (key == "d_drift") {
      c.limit.d_drift = to_double(full, value);
    } else if (key == "mesh") {
      c.limit.mesh = to_double(full, value);
    } else if (key == "max_cells") {
      c.limit.max_cells = to_u64(full, value);
    } else {
      throw std::invalid_argument("unknown config key '" + full + "'");
    }
  }
  c.limit.dim = c.model.dim;
  c.limit.horizon = c.horizon();
  c.validate();
  return c;
}

double ExperimentConfig::horizon() const {
  return eval_times.empty() ? 0.0 : *std::max_element(eval_times.begin(), eval_times.end());
}

void ExperimentConfig::validate() const {
  model.validate();
  if (n_values.empty()) throw std::invalid_argument("n_values is empty");
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (n_values[i] == 0) throw std::invalid_argument("n_values must be positive");
    if (i > 0 && !(n_values[i] > n_values[i - 1])) throw std::invalid_argument("n_values must be ascending");
  }
  if (replicates == 0) throw std::invalid_argument("replicates must be positive");
  if (eval_times.empty()) throw std::invalid_argument("eval_times is empty");
  for (double t : eval_times)
    if (!(t > 0.0 && std::isfinite(t))) throw std::invalid_argument("eval_times must be positive and finite");
  LimitModel lm = limit;
  lm.horizon = horizon();
  lm.validate();
}

json ExperimentConfig::to_json() const {
  json m = {{"dim", model.dim},
            {"jump_dist", to_string(model.jump_dist)},
            {"alpha", model.alpha},
            {"jump_value", model.jump_value},
            {"jump_table", model.jump_table},
            {"wait_dist", to_string(model.wait_dist)},
            {"beta", model.beta},
            {"wait_value", model.wait_value},
            {"jump_scale_exponent", model.jump_scale_exponent},
            {"wait_scale_exponent", model.wait_scale_exponent},
            {"max_renewals", model.max_renewals}};
  json l = {{"a_kind", to_string(limit.a_kind)}, {"alpha", limit.alpha},     {"a_scale", limit.a_scale},
            {"a_drift", limit.a_drift},          {"d_kind", to_string(limit.d_kind)},
            {"beta", limit.beta},                {"d_scale", limit.d_scale}, {"d_drift", limit.d_drift},
            {"mesh", limit.mesh},                {"max_cells", limit.max_cells}};
  return {{"model", m},
          {"limit", l},
          {"n_values", n_values},
          {"replicates", replicates},
          {"eval_times", eval_times},
          {"seed", seed},
          {"output_dir", output_dir}};
}

// ---------------------------------------------------------------- ensembles

PathEnsemble simulate_ensemble(const ExperimentConfig& config, std::size_t n, const std::string& process,
                               bool keep_paths) {
  if (process != "ctrw" && process != "octrw" && process != "cpctrw")
    throw std::invalid_argument("unknown process '" + process + "'");
  const double h = config.horizon();
  PathEnsemble e{process, n, config.seed, h, {}, config.eval_times, {}};
  e.marginals.assign(e.times.size(), std::vector<double>(config.replicates));
  if (keep_paths) e.paths.resize(config.replicates);
  parallel_for(config.replicates, config.threads, [&](std::size_t r) {
    const RenewalPair pair = [&] {
      try {
        return sample_renewal_pair(config.model, n, h, config.seed, replicate_stream(n, r));
      } catch (const GenerationOverflow& ex) {
        throw GenerationOverflow("n = " + std::to_string(n) + ", replicate " + std::to_string(r) + ": " + ex.what());
      }
    }();
    CadlagPath path = process == "ctrw" ? ctrw_path(pair, h) : process == "octrw" ? octrw_path(pair, h)
                                                                                  : cpctrw_path(pair, h);
    for (std::size_t i = 0; i < e.times.size(); ++i) e.marginals[i][r] = path.eval(e.times[i])[0];
    if (keep_paths) e.paths[r] = std::move(path);
  });
  return e;
}

namespace {

PathEnsemble limit_ensemble(const ExperimentConfig& config, bool keep_paths, double mesh, std::uint64_t stream_tag) {
  const double h = config.horizon();
  LimitModel lm = config.limit;
  lm.horizon = h;
  lm.mesh = mesh;
  PathEnsemble e{"limit", 0, config.seed, h, {}, config.eval_times, {}};
  e.marginals.assign(e.times.size(), std::vector<double>(config.replicates));
  if (keep_paths) e.paths.resize(config.replicates);
  parallel_for(config.replicates, config.threads, [&](std::size_t r) {
    const LimitPair p = sample_limit_pair(lm, config.seed, replicate_stream(0, r) | stream_tag);
    CadlagPath path = limit_cpctrw(p.a, p.d, h);
    for (std::size_t i = 0; i < e.times.size(); ++i) e.marginals[i][r] = path.eval(e.times[i])[0];
    if (keep_paths) e.paths[r] = std::move(path);
  });
  return e;
}

}  // namespace

PathEnsemble simulate_limit_ensemble(const ExperimentConfig& config, bool keep_paths) {
  return limit_ensemble(config, keep_paths, config.limit.mesh, 0);
}

void write_ensemble_lines(std::ostream& os, const PathEnsemble& e) { write_path_lines(os, e.paths); }

void write_marginals_csv(std::ostream& os, const PathEnsemble& e) {
  os << "replicate,t,value\n";
  for (std::size_t r = 0; r < (e.marginals.empty() ? 0 : e.marginals[0].size()); ++r)
    for (std::size_t i = 0; i < e.times.size(); ++i) os << r << ',' << fmt(e.times[i]) << ',' << fmt(e.marginals[i][r]) << '\n';
}

// ---------------------------------------------------------------- convergence

bool ConvergenceReport::passed() const {
  if (std::find(decreasing.begin(), decreasing.end(), false) != decreasing.end()) return false;
  const std::size_t last = config.n_values.back();
  for (const KsRow& row : rows)
    if (row.n == last && !(row.ks < row.critical)) return false;
  return !rows.empty();
}

json ConvergenceReport::to_json() const {
  json rs = json::array();
  for (const KsRow& r : rows) rs.push_back({{"n", r.n}, {"t", r.t}, {"ks", r.ks}, {"critical", r.critical}});
  json times = json::array();
  for (std::size_t i = 0; i < config.eval_times.size(); ++i)
    times.push_back({{"t", config.eval_times[i]},
                     {"ks_decreasing", static_cast<bool>(decreasing[i])},
                     {"reference_positive_share", reference_positive_share[i]},
                     {"ks_mesh_vs_double_mesh", mesh_sensitivity[i]},
                     {"reference_sign_symmetric", static_cast<bool>(reference_symmetric[i])}});
  return {{"kind", "marginal_convergence"},
          {"version", kVersion},
          {"generator", Rng::kId},
          {"config", config.to_json()},
          {"ks_level", 0.01},
          {"rows", rs},
          {"times", times},
          {"passed", passed()},
          {"note",
           "Weak convergence in the SM1 topology is checked through one-time marginals only: two-sample KS "
           "between the interpolated walk at scale n and f(Phi(A, D)) on a grid of the stated mesh, with "
           "reference and test ensembles of equal size."}};
}

std::string ConvergenceReport::to_csv() const {
  std::ostringstream os;
  os << "n,t,ks,critical\n";
  for (const KsRow& r : rows) os << r.n << ',' << fmt(r.t) << ',' << fmt(r.ks) << ',' << fmt(r.critical) << '\n';
  return os.str();
}

ConvergenceReport run_marginal_convergence(const ExperimentConfig& config) {
  config.validate();
  ConvergenceReport report;
  report.config = config;
  const PathEnsemble ref = simulate_limit_ensemble(config, false);
  // Independent reference on a doubled mesh, for the mesh sensitivity.
  const PathEnsemble coarse = limit_ensemble(config, false, 2.0 * config.limit.mesh, std::uint64_t{1} << 62);
  const std::size_t nt = config.eval_times.size();
  for (std::size_t i = 0; i < nt; ++i) report.mesh_sensitivity.push_back(ks_statistic(coarse.marginals[i], ref.marginals[i]));
  for (std::size_t i = 0; i < nt; ++i) {
    const auto& v = ref.marginals[i];
    const double pos = static_cast<double>(std::count_if(v.begin(), v.end(), [](double x) { return x > 0.0; }));
    const double nonzero = static_cast<double>(std::count_if(v.begin(), v.end(), [](double x) { return x != 0.0; }));
    report.reference_positive_share.push_back(nonzero > 0 ? pos / nonzero : 0.5);
    // Two-sided sign test at the 1% level, normal approximation.
    report.reference_symmetric.push_back(nonzero == 0 || std::abs(pos - nonzero / 2) <= 2.5758 * std::sqrt(nonzero / 4));
  }
  std::vector<std::vector<double>> ks(nt);
  for (std::size_t n : config.n_values) {
    const PathEnsemble e = simulate_ensemble(config, n, "cpctrw", false);
    for (std::size_t i = 0; i < nt; ++i) {
      const double d = ks_statistic(e.marginals[i], ref.marginals[i]);
      ks[i].push_back(d);
      report.rows.push_back({n, config.eval_times[i], d, ks_critical_value(config.replicates, config.replicates)});
    }
  }
  for (std::size_t i = 0; i < nt; ++i) {
    bool dec = true;
    for (std::size_t k = 1; k < ks[i].size(); ++k) dec = dec && ks[i][k] < ks[i][k - 1];
    report.decreasing.push_back(dec);
  }
  return report;
}

// ---------------------------------------------------------------- Example 1

CadlagPath example1_x() {
  return CadlagPath(1, 3, {{0, {0}, Segment::linear, 1.0, {1}}, {1, {1}, Segment::hold}, {2, {2}, Segment::linear, 3.0, {3}}});
}

CadlagPath example1_xn(std::size_t n) {
  if (n == 0) throw std::invalid_argument("sequence index starts at 1");
  const double a = 2.0 - 1.0 / static_cast<double>(n);
  std::vector<Knot> ks{{0, {0}, Segment::linear, 1.0, {1}}};
  if (a > 1.0) ks.push_back({1, {1}, Segment::hold});
  ks.push_back({a, {1 + 1.0 / static_cast<double>(n)}, Segment::hold});
  ks.push_back({2, {2}, Segment::linear, 3.0, {3}});
  return CadlagPath(1, 3, ks);
}

CadlagPath identity_path(double horizon) {
  return CadlagPath(1, horizon, {{0, {0}, Segment::linear, horizon, {horizon}}});
}

bool Example1Report::passed() const {
  for (const auto& r : rows) {
    if (!(r.fxn_x.upper <= 2.0 / static_cast<double>(r.n))) return false;
    if (r.n >= 4 && !(r.fxn_e.lower >= 0.25)) return false;
  }
  for (const auto& c : certificates) {
    if (c.sequence == "x_n" && c.target == "x" && !(c.found && c.verified)) return false;
    if (c.sequence == "f(x_n)" && c.target == "e" && c.eps == 0.2 && c.found) return false;
  }
  return !rows.empty();
}

json Example1Report::to_json() const {
  json rs = json::array();
  for (const auto& r : rows)
    rs.push_back({{"n", r.n},
                  {"m1_xn_x", bracket_json(r.xn_x)},
                  {"m1_fxn_x", bracket_json(r.fxn_x)},
                  {"m1_fxn_e", bracket_json(r.fxn_e)},
                  {"uniform_xn_x", r.uniform_xn_x}});
  json cs = json::array();
  for (const auto& c : certificates)
    cs.push_back({{"sequence", c.sequence},
                  {"target", c.target},
                  {"eps", c.eps},
                  {"found", c.found},
                  {"verified", c.verified},
                  {"n1", c.n1}});
  return {{"kind", "example1"}, {"version", kVersion}, {"mesh", mesh}, {"n_max", n_max},
          {"rows", rs},         {"certificates", cs},  {"passed", passed()}};
}

std::string Example1Report::to_csv() const {
  std::ostringstream os;
  os << "n,m1_xn_x_lower,m1_xn_x_upper,m1_fxn_x_lower,m1_fxn_x_upper,m1_fxn_e_lower,m1_fxn_e_upper,uniform_xn_x\n";
  for (const auto& r : rows)
    os << r.n << ',' << fmt(r.xn_x.lower) << ',' << fmt(r.xn_x.upper) << ',' << fmt(r.fxn_x.lower) << ','
       << fmt(r.fxn_x.upper) << ',' << fmt(r.fxn_e.lower) << ',' << fmt(r.fxn_e.upper) << ',' << fmt(r.uniform_xn_x)
       << '\n';
  return os.str();
}

Example1Report run_example1(const std::vector<double>& eps_list, std::size_t n_max, double mesh) {
  if (n_max == 0) throw std::invalid_argument("n_max must be positive");
  Example1Report report;
  report.mesh = mesh;
  report.n_max = n_max;
  const CadlagPath x = example1_x(), e = identity_path(3.0);
  std::vector<CadlagPath> xs, fs;
  for (std::size_t n = 1; n <= n_max; ++n) {
    xs.push_back(example1_xn(n));
    fs.push_back(stair_fill(xs.back()));
  }
  report.rows.resize(n_max);
  for (std::size_t k = 0; k < n_max; ++k) {
    Example1Row& r = report.rows[k];
    r.n = k + 1;
    r.xn_x = m1_distance(xs[k], x, 3.0, mesh);
    r.fxn_x = m1_distance(fs[k], x, 3.0, mesh);
    r.fxn_e = m1_distance(fs[k], e, 3.0, mesh);
    r.uniform_xn_x = uniform_distance(xs[k], x, 3.0);
  }
  struct Job {
    const char* sequence;
    const char* target;
    const std::vector<CadlagPath>* seq;
    const CadlagPath* limit;
  };
  const Job jobs[] = {{"x_n", "x", &xs, &x}, {"f(x_n)", "x", &fs, &x}, {"f(x_n)", "e", &fs, &e}};
  for (const Job& job : jobs) {
    for (double eps : eps_list) {
      CertificateOutcome out{job.sequence, job.target, eps};
      if (const auto cert = build_m1_certificate(*job.limit, *job.seq, eps, 3.0)) {
        out.found = true;
        out.n1 = cert->n1;
        out.verified = check_certificate(*cert, *job.limit, *job.seq);
      }
      report.certificates.push_back(out);
    }
  }
  return report;
}

// ---------------------------------------------------------------- stair sequences

std::vector<SequenceFamily> stair_sequence_families() {
  std::vector<SequenceFamily> out;
  const auto inv = [](std::size_t n) { return 1.0 / static_cast<double>(n); };

  out.push_back({"shifted-jumps", 4.0, CadlagPath::step(4.0, {{0, 0}, {1, 1}, {2, 3}}),
                 [inv](std::size_t n) {
                   return CadlagPath::step(4.0, {{0, 0}, {1 + 0.25 * inv(n), 1}, {2 - 0.25 * inv(n), 3}});
                 },
                 {0.5, 1.5}});

  out.push_back({"ramp-plateau-levels", 4.0,
                 CadlagPath(1, 4, {{0, {0}, Segment::linear}, {1, {1}, Segment::hold}, {2, {3}, Segment::linear, 4.0, {2}}}),
                 [inv](std::size_t n) {
                   const double u = inv(n);
                   return CadlagPath(1, 4, {{0, {0}, Segment::linear, 1.0, {1 + u}}, {1, {1 + u}, Segment::hold},
                                            {2 + u, {3 + u}, Segment::linear, 4.0, {2}}});
                 },
                 {1.5}});

  // Two-dimensional staircase with jumps at 0.5 k; x_n moves each jump time
  // and each level by O(1/n).
  auto stair2 = [](double scale) {
    std::vector<Knot> ks{{0, {0, 0}, Segment::hold}};
    for (int k = 1; k <= 7; ++k) {
      const double dt = 0.2 * std::sin(3.0 * k) * scale, dv = 0.5 * std::cos(2.0 * k) * scale;
      ks.push_back({0.5 * k + dt, {static_cast<double>(k) + dv, (k % 2 ? 1.0 : -1.0) - dv}, Segment::hold});
    }
    return CadlagPath(2, 4.0, ks);
  };
  std::vector<double> mids;
  for (int k = 0; k < 7; ++k) mids.push_back(0.5 * k + 0.25);
  out.push_back({"jittered-staircase-2d", 4.0, stair2(0.0), [stair2, inv](std::size_t n) { return stair2(inv(n)); }, mids});
  return out;
}

bool StairSequenceReport::passed() const {
  if (trending.empty()) return false;
  for (const auto& [name, ok] : trending)
    if (!ok) return false;
  return true;
}

json StairSequenceReport::to_json() const {
  json rs = json::array();
  for (const auto& r : rows)
    rs.push_back({{"family", r.family},
                  {"n", r.n},
                  {"m1_fxn_fx", bracket_json(r.fxn_fx)},
                  {"eta_error", r.eta_error},
                  {"theta_error", r.theta_error},
                  {"jump_error", r.jump_error}});
  return {{"kind", "stair_sequences"}, {"version", kVersion}, {"mesh", mesh},
          {"rows", rs},                {"trending", trending}, {"passed", passed()}};
}

std::string StairSequenceReport::to_csv() const {
  std::ostringstream os;
  os << "family,n,m1_lower,m1_upper,eta_error,theta_error,jump_error\n";
  for (const auto& r : rows)
    os << r.family << ',' << r.n << ',' << fmt(r.fxn_fx.lower) << ',' << fmt(r.fxn_fx.upper) << ','
       << fmt(r.eta_error) << ',' << fmt(r.theta_error) << ',' << fmt(r.jump_error) << '\n';
  return os.str();
}

StairSequenceReport run_stair_sequences(const std::vector<std::size_t>& ns, double mesh) {
  StairSequenceReport report;
  report.mesh = mesh;
  for (const SequenceFamily& fam : stair_sequence_families()) {
    const CadlagPath fx = stair_fill(fam.limit);
    std::vector<double> uppers;
    for (std::size_t n : ns) {
      const CadlagPath xn = fam.term(n);
      StairSequenceRow row{fam.name, n};
      row.fxn_fx = m1_distance(stair_fill(xn), fx, fam.horizon, mesh);
      for (double t : fam.stair_times) {
        row.eta_error = std::max(row.eta_error, std::abs(eta(xn, t) - eta(fam.limit, t)));
        const double th = theta(fam.limit, t), thn = theta(xn, t);
        row.theta_error = std::max(row.theta_error, std::abs(thn - th));
        const double jump = sup_distance(fam.limit.eval(th), fam.limit.left_limit(th));
        const double jump_n = std::isfinite(thn) ? sup_distance(xn.eval(thn), xn.left_limit(thn)) : 0.0;
        row.jump_error = std::max(row.jump_error, std::abs(jump_n - jump));
      }
      uppers.push_back(row.fxn_fx.upper);
      report.rows.push_back(row);
    }
    bool ok = !uppers.empty() && uppers.back() < 0.02;
    for (std::size_t k = 1; k < uppers.size(); ++k) ok = ok && uppers[k] <= uppers[k - 1] + mesh;
    report.trending[fam.name] = ok;
  }
  return report;
}

// ---------------------------------------------------------------- generators

CadlagPath random_step_path(Rng& rng, std::size_t knots, double horizon) {
  std::vector<double> ts{0.0};
  for (std::size_t i = 1; i < knots; ++i) ts.push_back(rng.uniform(0.0, horizon));
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  std::vector<std::pair<double, double>> ks;
  double v = 0.0;
  for (double t : ts) {
    // Repeat the previous level now and then so plateaus span several knots.
    if (ks.empty() || rng.uniform() >= 0.3) v = 0.5 * static_cast<double>(below(rng, 9)) - 2.0;
    ks.emplace_back(t, v);
  }
  return CadlagPath::step(horizon, ks);
}

CadlagPath random_monotone_step(Rng& rng, std::size_t knots) {
  std::vector<std::pair<double, double>> ks{{0.0, 0.0}};
  double t = 0.0, v = 0.0;
  for (std::size_t i = 1; i < knots; ++i) {
    t += rng.uniform(0.05, 1.0);
    if (rng.uniform() >= 0.25) v += 0.5 * static_cast<double>(1 + below(rng, 4));
    ks.emplace_back(t, v);
  }
  return CadlagPath::step(t + rng.uniform(0.05, 1.0), ks);
}

CadlagPath random_mixed_path(Rng& rng, std::size_t knots, double horizon) {
  std::vector<double> ts{0.0};
  for (std::size_t i = 1; i < knots; ++i) ts.push_back(rng.uniform(0.0, horizon));
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  std::vector<Knot> ks;
  for (double t : ts)
    ks.push_back({t, {0.5 * static_cast<double>(below(rng, 9)) - 2.0}, rng.uniform() < 0.3 ? Segment::linear : Segment::hold});
  ks.back().mode = Segment::hold;
  return CadlagPath(1, horizon, ks);
}

// ---------------------------------------------------------------- hooks

SuiteHooks mutant_hooks(const std::string& name) {
  SuiteHooks hooks;
  if (name.empty()) return hooks;
  if (name == "stairfill-skip-first") {
    hooks.fill = [](const CadlagPath& x) {
      const CadlagPath f = stair_fill(x);
      const auto jumps = x.discontinuities();
      if (jumps.empty()) return f;
      const double tau = jumps.front().time;
      std::vector<Knot> ks;
      for (std::size_t i = 0; i < x.size() && x.time(i) < tau; ++i) {
        Knot k{x.time(i), Vec(x.value(i).begin(), x.value(i).end()), x.mode(i)};
        if (k.mode == Segment::linear) {
          k.anchor_time = x.anchor_time(i);
          k.anchor_value.assign(x.anchor_value(i).begin(), x.anchor_value(i).end());
        }
        ks.push_back(std::move(k));
      }
      for (Knot& k : f.knots())
        if (k.time >= tau) ks.push_back(std::move(k));
      return CadlagPath(x.dim(), x.horizon(), ks);
    };
    return hooks;
  }
  if (name == "counting-off-by-one") {
    hooks.counting = [](const MonotonePath& t_path, std::size_t n, double t) -> std::size_t {
      const std::size_t k = counting_process(t_path, n, t);
      return k > 0 && t_path.eval(static_cast<double>(k) / static_cast<double>(n)) == t ? k - 1 : k;
    };
    return hooks;
  }
  throw std::invalid_argument("unknown mutant '" + name + "'");
}

// ---------------------------------------------------------------- suites

SuiteResult eta_theta_suite(std::uint64_t seed, std::size_t cases) {
  const auto start = std::chrono::steady_clock::now();
  Tally tally;
  tally.result.name = "eta-theta";
  tally.result.cases = cases;
  for (std::size_t c = 0; c < cases; ++c) {
    const CadlagPath x = step_corpus_path(seed, c);
    for (double t : probe_times(x, 200)) {
      if (t == 0.0) continue;
      const bool jump = x.is_discontinuity(t);
      // Largest knot strictly before t; its segment covers (t_i, t).
      const std::size_t i = x.segment_index(std::nextafter(t, 0.0));
      const bool flat_before = x.segment_constant(i) && !jump;
      const double e = eta(x, t);
      tally.check(e <= t, [&] { return at_case(c, t, "eta > t"); });
      tally.check((e < t) == flat_before, [&] { return at_case(c, t, "eta < t disagrees with constancy before t"); });
      if (e < t) {
        tally.check(x.is_constant_on(e, t) && x.left_limit1(t) == x.eval1(t),
                    [&] { return at_case(c, t, "x not constant on (eta, t]"); });
        tally.check(e == 0.0 || x.left_limit1(e) != x.eval1(t), [&] { return at_case(c, t, "eta not maximal"); });
      }
      const double th = theta(x, t);
      const bool flat_after = x.segment_constant(x.segment_index(t)) && !jump;
      tally.check(th >= t, [&] { return at_case(c, t, "theta < t"); });
      tally.check((th > t) == flat_after, [&] { return at_case(c, t, "theta > t disagrees with constancy after t"); });
      if (th > t) {
        const double end = std::isfinite(th) ? th : x.horizon();
        tally.check(end == t || (x.is_constant_on(t, end) && x.eval1(0.5 * (t + end)) == x.eval1(t)),
                    [&] { return at_case(c, t, "x not constant on [t, theta)"); });
        if (std::isfinite(th))
          tally.check(x.eval1(th) != x.left_limit1(t), [&] { return at_case(c, t, "x(theta) equals x(t-)"); });
      }
    }
  }
  tally.result.seconds = seconds_since(start);
  return tally.result;
}

SuiteResult stair_set_suite(std::uint64_t seed, std::size_t cases, const SuiteHooks& hooks) {
  const auto start = std::chrono::steady_clock::now();
  Tally tally;
  tally.result.name = "stair-set";
  tally.result.cases = cases;
  for (std::size_t c = 0; c < cases; ++c) {
    const CadlagPath x = step_corpus_path(seed, c);
    const CadlagPath fx = hooks.fill(x);
    for (double t : probe_times(x, 200)) {
      const double e = eta(x, t), th = theta(x, t);
      const bool stair = e < t && t < th && std::isfinite(th) && x.is_constant_on(e, th) && x.is_discontinuity(th);
      const bool moved = fx.eval1(t) != x.eval1(t);
      tally.check(moved == stair, [&] {
        return at_case(c, t, stair ? "f(x)(t) = x(t) inside a stair" : "f(x)(t) != x(t) outside the stairs");
      });
    }
  }
  tally.result.seconds = seconds_since(start);
  return tally.result;
}

SuiteResult inverse_suite(std::uint64_t seed, std::size_t cases) {
  const auto start = std::chrono::steady_clock::now();
  Tally tally;
  tally.result.name = "inverse-of-composition";
  tally.result.cases = cases;
  for (std::size_t c = 0; c < cases; ++c) {
    Rng rng = suite_rng(seed, kInverseCorpus, c);
    const MonotonePath y(random_monotone_step(rng, 2 + below(rng, 40)));
    const MonotonePath lhs = inverse_of_composed(y);
    const CadlagPath rhs = phi(y.path(), y);
    const double top = y.top();
    tally.check(lhs.horizon() == top && rhs.horizon() == top, [&] { return at_case(c, top, "horizons differ"); });
    std::vector<double> ts;
    for (int k = 0; k < 1000; ++k) ts.push_back(top * k / 1000.0);
    for (std::size_t i = 0; i < lhs.path().size(); ++i) ts.push_back(lhs.path().time(i));
    for (std::size_t i = 0; i < rhs.size(); ++i) ts.push_back(rhs.time(i));
    // Inside jump gaps of y and at the levels where plateaus close. The top
    // level itself lies outside the domain of the inverse.
    for (std::size_t i = 0; i < y.path().size(); ++i) {
      const double v = y.path().value(i)[0];
      ts.push_back(v);
      if (i > 0) {
        const double before = y.path().value(i - 1)[0];
        if (v > before) ts.push_back(0.5 * (before + v));
      }
    }
    for (double t : ts) {
      if (!(t >= 0.0 && t < top)) continue;
      const double a = lhs.eval(t), b = rhs.eval1(t);
      tally.check(std::abs(a - b) <= 1e-12, [&] { return at_case(c, t, fmt(a) + " vs " + fmt(b)); });
    }
  }
  tally.result.seconds = seconds_since(start);
  return tally.result;
}

namespace {

CtrwModel random_model(Rng& rng) {
  CtrwModel m;
  switch (below(rng, 3)) {
    case 0: m.jump_dist = JumpDist::gaussian; break;
    case 1:
      m.jump_dist = JumpDist::symmetric_stable;
      m.alpha = rng.uniform(0.6, 2.0);
      m.jump_scale_exponent = 1.0 / m.alpha;
      break;
    default:
      m.jump_dist = JumpDist::table;
      m.jump_table = {-1.0, 0.5, 2.0};
      break;
  }
  switch (below(rng, 4)) {
    case 0: m.wait_dist = WaitDist::exponential; break;
    case 1:
      m.wait_dist = WaitDist::pareto;
      m.beta = rng.uniform(0.5, 1.5);
      m.wait_scale_exponent = m.beta < 1.0 ? 1.0 / m.beta : 1.0;
      break;
    case 2:
      m.wait_dist = WaitDist::one_sided_stable;
      m.beta = rng.uniform(0.4, 0.9);
      m.wait_scale_exponent = 1.0 / m.beta;
      break;
    default:
      m.wait_dist = WaitDist::deterministic;
      m.wait_value = rng.uniform(0.5, 2.0);
      break;
  }
  return m;
}

}  // namespace

SuiteResult renewal_identity_suite(std::uint64_t seed, std::size_t models, const SuiteHooks& hooks) {
  const auto start = std::chrono::steady_clock::now();
  Tally tally;
  tally.result.name = "renewal-identities";
  tally.result.cases = models;
  for (std::size_t c = 0; c < models; ++c) {
    Rng rng = suite_rng(seed, kRenewalCorpus, c);
    const CtrwModel model = random_model(rng);
    const std::size_t n = 1 + below(rng, 200);
    const double h = rng.uniform(0.5, 3.0);
    const RenewalPair pair = sample_renewal_pair(model, n, h, rng.next_u64());
    const double nn = static_cast<double>(n);
    const MonotonePath& tp = pair.t_path;
    auto renewal = [&](std::size_t k) { return tp.eval(static_cast<double>(k) / nn); };

    const CadlagPath r = ctrw_path(pair, h);
    const CadlagPath bar = cpctrw_path(pair, h);
    const CadlagPath filled = hooks.fill(ctrw_path(pair, pair.last_renewal())).restrict(h);
    const CadlagPath ph = phi(pair.s_path, tp).restrict(h);
    tally.check(bar == filled, [&] { return at_case(c, h, "interpolated walk differs from f(R_n) in knot form"); });
    tally.check(r == ph, [&] { return at_case(c, h, "R_n differs from Phi(S_n, T_n) in knot form"); });

    std::vector<double> ts;
    for (int k = 1; k <= 500; ++k) ts.push_back(std::min(h, h * k / 500.0));
    for (std::size_t k = 0; k <= pair.renewal_count && renewal(k) <= h; ++k) ts.push_back(renewal(k));
    for (double t : ts) {
      tally.check(bar.eval1(t) == filled.eval1(t), [&] { return at_case(c, t, "R-bar_n(t) != f(R_n)(t)"); });
      tally.check(r.eval1(t) == ph.eval1(t), [&] { return at_case(c, t, "R_n(t) != Phi(S_n, T_n)(t)"); });
      const std::size_t nt = hooks.counting(tp, n, t);
      const double lo = renewal(nt), hi = renewal(nt + 1);
      tally.check(lo <= t && t < hi, [&] { return at_case(c, t, "renewals do not bracket t"); });
      tally.check(hooks.counting(tp, n, lo) == nt, [&] { return at_case(c, t, "N_n(T_n(N_n(t)/n)) != N_n(t)"); });
      tally.check(hooks.counting(tp, n, hi) == nt + 1, [&] { return at_case(c, t, "N_n at the next renewal != N_n(t) + 1"); });
      if (t > lo) {
        tally.check(eta(r, t) == lo, [&] { return at_case(c, t, "eta of R_n is not the last renewal"); });
        tally.check(theta(r, t) == (hi <= h ? hi : kInfinity), [&] { return at_case(c, t, "theta of R_n is not the next renewal"); });
      }
    }
    for (std::size_t k = 0; k < pair.renewal_count; ++k)
      if (renewal(k) < renewal(k + 1))
        tally.check(hooks.counting(tp, n, renewal(k)) == k, [&] { return at_case(c, renewal(k), "N_n(T_n(k/n)) != k"); });
  }
  tally.result.seconds = seconds_since(start);
  return tally.result;
}

SuiteResult metric_sanity_suite(std::uint64_t seed, std::size_t pairs) {
  const auto start = std::chrono::steady_clock::now();
  Tally tally;
  tally.result.name = "metric-sanity";
  tally.result.cases = pairs;
  constexpr double kHorizon = 3.0, kMesh = 1e-3, kSlack = kMesh + 1e-12;
  for (std::size_t c = 0; c < pairs; ++c) {
    Rng rng = suite_rng(seed, kMetricCorpus, c);
    const CadlagPath x = random_mixed_path(rng, 3 + below(rng, 8), kHorizon);
    const CadlagPath y = random_mixed_path(rng, 3 + below(rng, 8), kHorizon);
    const CadlagPath z = random_mixed_path(rng, 3 + below(rng, 8), kHorizon);
    const Bracket m = m1_distance(x, y, kHorizon, kMesh);
    const Bracket j = j1_distance(x, y, kHorizon, kMesh);
    const double u = uniform_distance(x, y, kHorizon);
    auto what = [&](const std::string& s) { return [&c, s] { return "pair " + std::to_string(c) + ": " + s; }; };
    tally.check(m.lower <= m.upper && j.lower <= j.upper, what("bracket inverted"));
    tally.check(m.upper - m.lower <= kSlack, what("M1 bracket wider than the mesh"));
    tally.check(m.upper <= j.upper + kSlack, what("M1 above J1"));
    tally.check(j.upper <= u + kSlack, what("J1 above uniform"));
    tally.check(m.lower <= j.upper + 1e-12, what("M1 lower bound above J1 upper bound"));

    const Bracket mm = m1_distance(x, x, kHorizon, kMesh), jj = j1_distance(x, x, kHorizon, kMesh);
    tally.check(mm.lower == 0.0 && mm.upper == 0.0, what("M1 self-distance not 0"));
    tally.check(jj.lower == 0.0 && jj.upper == 0.0, what("J1 self-distance not 0"));
    tally.check(uniform_distance(x, x, kHorizon) == 0.0, what("uniform self-distance not 0"));

    const Bracket myz = m1_distance(y, z, kHorizon, kMesh), mxz = m1_distance(x, z, kHorizon, kMesh);
    tally.check(mxz.lower <= m.upper + myz.upper + kSlack, what("M1 triangle inequality"));
    tally.check(m.lower <= mxz.upper + myz.upper + kSlack, what("M1 triangle inequality"));
    const double uyz = uniform_distance(y, z, kHorizon), uxz = uniform_distance(x, z, kHorizon);
    tally.check(uxz <= u + uyz + 1e-12, what("uniform triangle inequality"));
  }
  tally.result.seconds = seconds_since(start);
  return tally.result;
}

bool PropertyReport::passed() const {
  for (const auto& s : suites)
    if (!s.passed()) return false;
  return !suites.empty();
}

json PropertyReport::to_json(bool with_timing) const {
  json ss = json::array();
  for (const auto& s : suites) {
    json j = {{"name", s.name},         {"cases", s.cases},   {"checks", s.checks},
              {"failures", s.failures}, {"passed", s.passed()}, {"first_failure", s.first_failure}};
    if (with_timing) j["seconds"] = s.seconds;
    ss.push_back(j);
  }
  return {{"kind", "property_suites"}, {"version", kVersion}, {"generator", Rng::kId}, {"seed", seed},
          {"cases", cases},            {"mutant", mutant},    {"suites", ss},           {"passed", passed()}};
}

PropertyReport run_property_suites(std::uint64_t seed, std::size_t cases, const std::string& mutant) {
  const SuiteHooks hooks = mutant_hooks(mutant);
  PropertyReport report{seed, cases, mutant, {}};
  report.suites.push_back(eta_theta_suite(seed, cases));
  report.suites.push_back(stair_set_suite(seed, cases, hooks));
  report.suites.push_back(inverse_suite(seed, cases));
  report.suites.push_back(renewal_identity_suite(seed, std::max<std::size_t>(1, cases / 5), hooks));
  report.suites.push_back(metric_sanity_suite(seed, std::max<std::size_t>(1, cases / 2)));
  return report;
}

}  // namespace ctrw
