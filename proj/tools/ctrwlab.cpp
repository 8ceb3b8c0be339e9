// ctrwlab: command line driver for the path library and the experiments.
// Exit codes: 0 pass, 1 suite or check failure, 2 usage error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ctrwlab/lab.hpp"
#include "ctrwlab/metrics.hpp"
#include "ctrwlab/path_io.hpp"
#include "ctrwlab/transforms.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ctrw;

namespace {

constexpr int kPass = 0, kFail = 1, kUsage = 2;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  double mesh = 1e-3;
  std::string format = "json";
  std::size_t cases = 1000;
  std::string mutant;
  std::string process = "cpctrw";
  std::string metric;
  std::vector<std::string> files;
  std::optional<double> horizon;
  double eps = 0.1;
  std::vector<double> eps_list{0.2, 0.1, 0.05};
  std::size_t n_max = 128;
};

ExperimentConfig load_config(const Options& o) {
  std::map<std::string, std::string> kv;
  if (!o.config.empty()) {
    for (const CLI::ConfigItem& item : CLI::ConfigINI().from_file(o.config)) {
      if (item.name == "++" || item.name == "--") continue;  // section markers
      std::string joined;
      for (const auto& s : item.inputs) joined += (joined.empty() ? "" : ",") + s;
      kv[item.fullname()] = joined;
    }
  }
  auto c = ExperimentConfig::from_map(kv);
  if (o.seed) c.seed = *o.seed;
  if (!o.out.empty()) c.output_dir = o.out;
  return c;
}

// Writes `text` to out/name when --out is given.
void save(const Options& o, const std::string& name, const std::string& text) {
  if (o.out.empty()) return;
  fs::create_directories(o.out);
  const fs::path file = fs::path(o.out) / name;
  std::ofstream os(file);
  if (!os) throw std::runtime_error("cannot write " + file.string());
  os << text;
}

double horizon_for(const Options& o, const CadlagPath& a, const CadlagPath& b) {
  return o.horizon ? *o.horizon : std::min(a.horizon(), b.horizon());
}

int cmd_simulate(const Options& o) {
  const ExperimentConfig c = load_config(o);
  json summary = {{"config", c.to_json()}, {"generator", Rng::kId}, {"process", o.process}, {"files", json::array()}};
  auto emit = [&](const PathEnsemble& e, const std::string& stem) {
    std::ostringstream os;
    std::string name;
    if (o.format == "csv") {
      write_marginals_csv(os, e);
      name = stem + ".csv";
    } else {
      write_ensemble_lines(os, e);
      name = stem + ".jsonl";
    }
    if (o.out.empty()) {
      std::cout << os.str();
    } else {
      save(o, name, os.str());
      summary["files"].push_back(name);
    }
  };
  if (o.process == "limit") {
    emit(simulate_limit_ensemble(c), "ensemble_limit");
  } else {
    for (std::size_t n : c.n_values) emit(simulate_ensemble(c, n, o.process), "ensemble_" + o.process + "_n" + std::to_string(n));
  }
  if (!o.out.empty()) {
    save(o, "simulate.json", summary.dump(2) + "\n");
    std::cout << summary.dump(2) << "\n";
  }
  return kPass;
}

int cmd_stairfill(const Options& o) {
  const CadlagPath f = stair_fill(read_path_file(o.files.at(0)));
  std::ostringstream os;
  if (o.format == "csv") {
    write_csv(os, f, o.mesh);
  } else {
    os << to_json(f).dump() << "\n";
  }
  std::cout << os.str();
  save(o, o.format == "csv" ? "stairfill.csv" : "stairfill.json", os.str());
  return kPass;
}

int cmd_distance(const Options& o) {
  const CadlagPath a = read_path_file(o.files.at(0)), b = read_path_file(o.files.at(1));
  const double T = horizon_for(o, a, b);
  json out = {{"metric", o.metric}, {"horizon", T}, {"mesh", o.mesh}};
  if (o.metric == "uniform") {
    const double d = uniform_distance(a, b, T);
    out["lower"] = d;
    out["upper"] = d;
  } else {
    const Bracket br = o.metric == "m1" ? m1_distance(a, b, T, o.mesh) : j1_distance(a, b, T, o.mesh);
    out["lower"] = br.lower;
    out["upper"] = br.upper;
  }
  if (o.format == "csv") {
    std::ostringstream os;
    os << "metric,horizon,mesh,lower,upper\n"
       << o.metric << ',' << out["horizon"].dump() << ',' << out["mesh"].dump() << ',' << out["lower"].dump() << ','
       << out["upper"].dump() << "\n";
    std::cout << os.str();
    save(o, "distance.csv", os.str());
  } else {
    std::cout << out.dump(2) << "\n";
    save(o, "distance.json", out.dump(2) + "\n");
  }
  return kPass;
}

int cmd_certify(const Options& o) {
  const CadlagPath x = read_path_file(o.files.at(0));
  const std::vector<CadlagPath> xs = read_path_lines(o.files.at(1));
  if (xs.empty()) throw UsageError("sequence file holds no paths");
  double T = x.horizon();
  for (const auto& p : xs) T = std::min(T, p.horizon());
  if (o.horizon) T = *o.horizon;
  const auto cert = build_m1_certificate(x, xs, o.eps, T);
  json out = {{"eps", o.eps}, {"horizon", T}, {"found", cert.has_value()}};
  bool ok = false;
  if (cert) {
    ok = check_certificate(*cert, x, xs);
    out["verified"] = ok;
    out["certificate"] = to_json(*cert);
  }
  std::cout << json{{"eps", o.eps}, {"found", cert.has_value()}, {"verified", ok}, {"n1", cert ? cert->n1 : 0}}.dump(2)
            << "\n";
  save(o, "certificate.json", out.dump(2) + "\n");
  return ok ? kPass : kFail;
}

int cmd_converge(const Options& o) {
  const ConvergenceReport r = run_marginal_convergence(load_config(o));
  const std::string text = o.format == "csv" ? r.to_csv() : r.to_json().dump(2) + "\n";
  std::cout << text;
  if (!o.out.empty()) {
    save(o, "convergence.json", r.to_json().dump(2) + "\n");
    save(o, "convergence.csv", r.to_csv());
  }
  return r.passed() ? kPass : kFail;
}

int cmd_example1(const Options& o) {
  const Example1Report r = run_example1(o.eps_list, o.n_max, o.mesh);
  const std::string text = o.format == "csv" ? r.to_csv() : r.to_json().dump(2) + "\n";
  std::cout << text;
  if (!o.out.empty()) {
    save(o, "example1.json", r.to_json().dump(2) + "\n");
    save(o, "example1.csv", r.to_csv());
  }
  return r.passed() ? kPass : kFail;
}

int cmd_proptest(const Options& o) {
  const PropertyReport r = run_property_suites(o.seed.value_or(1), o.cases, o.mutant);
  for (const auto& s : r.suites)
    std::cerr << (s.passed() ? "pass " : "FAIL ") << s.name << ": " << s.checks << " checks, " << s.failures
              << " failures, " << s.seconds << " s" << (s.passed() ? "" : " (" + s.first_failure + ")") << "\n";
  std::cout << r.to_json().dump(2) << "\n";
  save(o, "proptest.json", r.to_json().dump(2) + "\n");
  return r.passed() ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cadlag path algebra, Skorokhod distances and CTRW simulation"};
  app.require_subcommand(1);
  Options o;
  const std::vector<std::string> formats{"csv", "json"};

  auto common = [&](CLI::App* sub, bool config, bool seed) {
    if (config) sub->add_option("--config", o.config, "Key-value experiment config (INI)")->check(CLI::ExistingFile);
    if (seed) sub->add_option("--seed", o.seed, "Seed (overrides the config)");
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember(formats));
  };

  auto* simulate = app.add_subcommand("simulate", "Emit a replicate ensemble");
  common(simulate, true, true);
  simulate->add_option("--process", o.process, "ctrw, octrw, cpctrw or limit")
      ->check(CLI::IsMember({"ctrw", "octrw", "cpctrw", "limit"}));

  auto* stairfill = app.add_subcommand("stairfill", "Apply f to a serialized path");
  stairfill->add_option("path", o.files, "Path JSON file")->required()->expected(1)->check(CLI::ExistingFile);
  stairfill->add_option("--mesh", o.mesh, "CSV sampling step")->check(CLI::PositiveNumber);
  common(stairfill, false, false);

  auto* distance = app.add_subcommand("distance", "Distance between two path files");
  distance->add_option("metric", o.metric, "m1, j1 or uniform")->required()->check(CLI::IsMember({"m1", "j1", "uniform"}));
  distance->add_option("paths", o.files, "Two path JSON files")->required()->expected(2)->check(CLI::ExistingFile);
  distance->add_option("--mesh", o.mesh, "Bracket width")->check(CLI::PositiveNumber);
  distance->add_option("--horizon", o.horizon, "Time horizon (default: the shorter path horizon)");
  common(distance, false, false);

  auto* certify = app.add_subcommand("certify", "Search and check an ordered-subset certificate");
  certify->add_option("limit", o.files, "Limit path JSON, then the sequence as JSON lines")
      ->required()
      ->expected(2)
      ->check(CLI::ExistingFile);
  certify->add_option("--eps", o.eps, "Tolerance")->required()->check(CLI::PositiveNumber);
  certify->add_option("--horizon", o.horizon, "Time horizon");
  common(certify, false, false);

  auto* converge = app.add_subcommand("converge", "Marginal KS convergence study");
  common(converge, true, true);

  auto* example1 = app.add_subcommand("example1", "Reproduce the x_n, f(x_n) example");
  example1->add_option("--eps", o.eps_list, "Certificate tolerances")->delimiter(',');
  example1->add_option("--nmax", o.n_max, "Largest n")->check(CLI::PositiveNumber);
  example1->add_option("--mesh", o.mesh, "Bracket width")->check(CLI::PositiveNumber);
  common(example1, false, false);

  auto* proptest = app.add_subcommand("proptest", "Randomized property suites");
  proptest->add_option("--cases", o.cases, "Paths per suite")->check(CLI::PositiveNumber);
  proptest->add_option("--mutant", o.mutant, "Inject a known bug")
      ->check(CLI::IsMember({"stairfill-skip-first", "counting-off-by-one"}));
  common(proptest, false, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kUsage;
  }

  try {
    if (*simulate) return cmd_simulate(o);
    if (*stairfill) return cmd_stairfill(o);
    if (*distance) return cmd_distance(o);
    if (*certify) return cmd_certify(o);
    if (*converge) return cmd_converge(o);
    if (*example1) return cmd_example1(o);
    if (*proptest) return cmd_proptest(o);
  } catch (const std::invalid_argument& e) {
    std::cerr << "ctrwlab: " << e.what() << "\n";
    return kUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "ctrwlab: " << e.what() << "\n";
    return kUsage;
  } catch (const CLI::Error& e) {
    std::cerr << "ctrwlab: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "ctrwlab: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}
