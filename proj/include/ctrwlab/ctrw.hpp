#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctrwlab/path.hpp"
#include "ctrwlab/transforms.hpp"

namespace ctrw {

/// Renewal generation hit the model's draw cap before passing the horizon.
class GenerationOverflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class JumpDist { gaussian, symmetric_stable, deterministic, table };
enum class WaitDist { exponential, pareto, one_sided_stable, deterministic };

std::string to_string(JumpDist d);
std::string to_string(WaitDist d);
JumpDist parse_jump_dist(const std::string& s);
WaitDist parse_wait_dist(const std::string& s);

/// Distribution of (Y, J) and the per-n scaling Y_{n,k} = n^{-a} Y_k,
/// J_{n,k} = n^{-b} J_k. Coordinates of Y are drawn independently.
struct CtrwModel {
  std::size_t dim = 1;
  JumpDist jump_dist = JumpDist::gaussian;
  double alpha = 2.0;             // symmetric_stable index
  double jump_value = 1.0;        // deterministic jump
  std::vector<double> jump_table; // table: uniform choice per coordinate
  WaitDist wait_dist = WaitDist::exponential;
  double beta = 1.0;              // pareto / one_sided_stable index
  double wait_value = 1.0;        // deterministic wait
  double jump_scale_exponent = 0.5;
  double wait_scale_exponent = 1.0;
  std::size_t max_renewals = 100'000'000;

  void validate() const;
};

/// S_n and T_n on index time k/n, k = 0..renewal_count.
struct RenewalPair {
  CadlagPath s_path;
  MonotonePath t_path;
  std::size_t n = 1;
  std::size_t renewal_count = 0;

  /// T_n(renewal_count / n), the last generated renewal instant.
  double last_renewal() const { return t_path.top(); }
};

/// Draws renewals until T_n first exceeds `horizon`; that last renewal is
/// the one past the horizon needed by the overshooting and interpolated walks.
RenewalPair sample_renewal_pair(const CtrwModel& model, std::size_t n, double horizon, std::uint64_t seed,
                                std::uint64_t stream = 0);

/// N_n(t) = max{k >= 0 : T_n(k/n) <= t}.
std::size_t counting_process(const MonotonePath& t_path, std::size_t n, double t);

/// R_n(t) = S_n(N_n(t)/n) on [0, horizon], horizon <= last renewal.
CadlagPath ctrw_path(const RenewalPair& pair, double horizon);

/// S_n(N_n(t)/n + 1/n) on [0, horizon]; needs a renewal after the horizon.
CadlagPath octrw_path(const RenewalPair& pair, double horizon);

/// Linear interpolation of the points (T_n(k/n), S_n(k/n)) on [0, horizon];
/// needs a renewal after the horizon.
CadlagPath cpctrw_path(const RenewalPair& pair, double horizon);

}  // namespace ctrw
