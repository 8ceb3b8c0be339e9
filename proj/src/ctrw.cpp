#include "ctrwlab/ctrw.hpp"

#include <algorithm>
#include <cmath>

#include "ctrwlab/rng.hpp"

namespace ctrw {

std::string to_string(JumpDist d) {
  switch (d) {
    case JumpDist::gaussian: return "gaussian";
    case JumpDist::symmetric_stable: return "symmetric_stable";
    case JumpDist::deterministic: return "deterministic";
    case JumpDist::table: return "table";
  }
  return "?";
}

std::string to_string(WaitDist d) {
  switch (d) {
    case WaitDist::exponential: return "exponential";
    case WaitDist::pareto: return "pareto";
    case WaitDist::one_sided_stable: return "one_sided_stable";
    case WaitDist::deterministic: return "deterministic";
  }
  return "?";
}

JumpDist parse_jump_dist(const std::string& s) {
  for (auto d : {JumpDist::gaussian, JumpDist::symmetric_stable, JumpDist::deterministic, JumpDist::table})
    if (to_string(d) == s) return d;
  throw std::invalid_argument("unknown jump_dist '" + s + "'");
}

WaitDist parse_wait_dist(const std::string& s) {
  for (auto d : {WaitDist::exponential, WaitDist::pareto, WaitDist::one_sided_stable, WaitDist::deterministic})
    if (to_string(d) == s) return d;
  throw std::invalid_argument("unknown wait_dist '" + s + "'");
}

void CtrwModel::validate() const {
  if (dim == 0) throw std::invalid_argument("model dimension must be positive");
  if (jump_dist == JumpDist::symmetric_stable && !(alpha > 0.0 && alpha <= 2.0))
    throw std::invalid_argument("alpha must lie in (0, 2]");
  if (jump_dist == JumpDist::table && jump_table.empty()) throw std::invalid_argument("jump table is empty");
  if ((wait_dist == WaitDist::pareto && !(beta > 0.0)) ||
      (wait_dist == WaitDist::one_sided_stable && !(beta > 0.0 && beta < 1.0)))
    throw std::invalid_argument("beta out of range for the waiting-time law");
  if (wait_dist == WaitDist::deterministic && !(wait_value > 0.0))
    throw std::invalid_argument("deterministic wait must be positive");
  if (!(std::isfinite(jump_scale_exponent) && jump_scale_exponent > 0.0 && std::isfinite(wait_scale_exponent) &&
        wait_scale_exponent > 0.0))
    throw std::invalid_argument("scaling exponents must be finite and positive");
}

namespace {

double draw_jump(const CtrwModel& m, Rng& rng) {
  switch (m.jump_dist) {
    case JumpDist::gaussian: return rng.normal();
    case JumpDist::symmetric_stable: return sample_symmetric_stable(rng, m.alpha);
    case JumpDist::deterministic: return m.jump_value;
    case JumpDist::table: {
      const auto k = static_cast<std::size_t>(rng.uniform() * static_cast<double>(m.jump_table.size()));
      return m.jump_table[std::min(k, m.jump_table.size() - 1)];
    }
  }
  return 0.0;
}

double draw_wait(const CtrwModel& m, Rng& rng) {
  switch (m.wait_dist) {
    case WaitDist::exponential: return rng.exponential();
    case WaitDist::pareto: return sample_pareto(rng, m.beta);
    case WaitDist::one_sided_stable: return sample_one_sided_stable(rng, m.beta);
    case WaitDist::deterministic: return m.wait_value;
  }
  return 1.0;
}

struct Renewal {
  double time;
  std::size_t index;  // last renewal index at this instant
};

// Distinct renewal instants; simultaneous renewals keep the last index.
std::vector<Renewal> renewals(const RenewalPair& pair) {
  const auto& t = pair.t_path.path().values();
  std::vector<Renewal> out;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (!out.empty() && out.back().time == t[k]) {
      out.back().index = k;
    } else {
      out.push_back({t[k], k});
    }
  }
  return out;
}

void check_horizon(const RenewalPair& pair, double horizon, bool needs_overshoot) {
  if (!(horizon >= 0.0)) throw DomainError("horizon must be >= 0");
  const double last = pair.last_renewal();
  if (needs_overshoot ? !(last > horizon) : !(last >= horizon))
    throw DomainError("renewals do not cover the requested horizon");
}

}  // namespace

RenewalPair sample_renewal_pair(const CtrwModel& model, std::size_t n, double horizon, std::uint64_t seed,
                                std::uint64_t stream) {
  model.validate();
  if (n == 0) throw std::invalid_argument("scale index n must be positive");
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  const double nn = static_cast<double>(n);
  const double cy = std::pow(nn, -model.jump_scale_exponent);
  const double cj = std::pow(nn, -model.wait_scale_exponent);
  const std::size_t d = model.dim;

  Rng rng(seed, stream);
  std::vector<double> times{0.0}, s_values(d, 0.0), t_values{0.0};
  Vec s(d, 0.0);
  double t = 0.0;
  std::size_t k = 0;
  while (!(t > horizon)) {
    if (k >= model.max_renewals)
      throw GenerationOverflow("no renewal past horizon " + std::to_string(horizon) + " within " +
                               std::to_string(model.max_renewals) + " draws");
    for (std::size_t c = 0; c < d; ++c) s[c] += cy * draw_jump(model, rng);
    double j = cj * draw_wait(model, rng);
    for (int retry = 0; !(j > 0.0); ++retry) {
      if (retry == 1000) throw GenerationOverflow("scaled waiting times underflow to zero");
      j = cj * draw_wait(model, rng);
    }
    t += j;
    ++k;
    times.push_back(static_cast<double>(k) / nn);
    s_values.insert(s_values.end(), s.begin(), s.end());
    t_values.push_back(t);
  }
  const double index_horizon = static_cast<double>(k) / nn;
  std::vector<Segment> modes(times.size(), Segment::hold);
  CadlagPath s_path(d, index_horizon, times, std::move(s_values), modes);
  CadlagPath t_path(1, index_horizon, std::move(times), std::move(t_values), std::move(modes));
  return {std::move(s_path), MonotonePath(std::move(t_path)), n, k};
}

std::size_t counting_process(const MonotonePath& t_path, std::size_t n, double t) {
  const CadlagPath& p = t_path.path();
  if (!(t >= 0.0)) throw DomainError("counting process needs t >= 0");
  if (t > t_path.top()) throw DomainError("t lies beyond the generated renewals");
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p.mode(i) != Segment::hold) throw std::invalid_argument("counting process needs a hold-mode T path");
  const auto& v = p.values();
  const auto i = static_cast<std::size_t>(std::upper_bound(v.begin(), v.end(), t) - v.begin()) - 1;
  const double nn = static_cast<double>(n);
  if (i + 1 == p.size()) return static_cast<std::size_t>(std::floor(p.horizon() * nn + 1e-9));
  // Largest k with k/n before the next knot.
  const double end = p.time(i + 1) * nn;
  const double k_end = std::round(end);
  return static_cast<std::size_t>(std::abs(end - k_end) < 1e-9 ? k_end - 1.0 : std::floor(end));
}

CadlagPath ctrw_path(const RenewalPair& pair, double horizon) {
  check_horizon(pair, horizon, false);
  const std::size_t d = pair.s_path.dim();
  std::vector<double> times, values;
  for (const Renewal& r : renewals(pair)) {
    if (r.time > horizon) break;
    times.push_back(r.time);
    const auto v = pair.s_path.value(r.index);
    values.insert(values.end(), v.begin(), v.end());
  }
  std::vector<Segment> modes(times.size(), Segment::hold);
  return CadlagPath(d, horizon, std::move(times), std::move(values), std::move(modes));
}

CadlagPath octrw_path(const RenewalPair& pair, double horizon) {
  check_horizon(pair, horizon, true);
  const std::size_t d = pair.s_path.dim();
  std::vector<double> times, values;
  for (const Renewal& r : renewals(pair)) {
    if (r.time > horizon) break;
    times.push_back(r.time);
    const auto v = pair.s_path.value(r.index + 1);
    values.insert(values.end(), v.begin(), v.end());
  }
  std::vector<Segment> modes(times.size(), Segment::hold);
  return CadlagPath(d, horizon, std::move(times), std::move(values), std::move(modes));
}

CadlagPath cpctrw_path(const RenewalPair& pair, double horizon) {
  check_horizon(pair, horizon, true);
  const std::size_t d = pair.s_path.dim();
  const std::vector<Renewal> rs = renewals(pair);
  std::vector<double> times, values, anchor_times, anchor_values;
  for (std::size_t i = 0; i < rs.size() && rs[i].time <= horizon; ++i) {
    times.push_back(rs[i].time);
    const auto v = pair.s_path.value(rs[i].index);
    values.insert(values.end(), v.begin(), v.end());
    // A renewal after the horizon exists, so rs[i + 1] is always there.
    anchor_times.push_back(rs[i + 1].time);
    const auto a = pair.s_path.value(rs[i + 1].index);
    anchor_values.insert(anchor_values.end(), a.begin(), a.end());
  }
  std::vector<Segment> modes(times.size(), Segment::linear);
  return CadlagPath(d, horizon, std::move(times), std::move(values), std::move(modes), std::move(anchor_times),
                    std::move(anchor_values));
}

}  // namespace ctrw
