#include "ctrwlab/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ctrw {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : key_(splitmix64_mix(seed ^ splitmix64_mix(stream + kGolden))) {}

std::uint64_t Rng::next_u64() {
  ++counter_;
  return splitmix64_mix(key_ + counter_ * kGolden);
}

double Rng::uniform() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double a = 2.0 * std::numbers::pi * uniform();
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

double Rng::exponential() { return -std::log(uniform()); }

double sample_pareto(Rng& rng, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("pareto exponent must be positive");
  return std::pow(rng.uniform(), -1.0 / beta);
}

double sample_symmetric_stable(Rng& rng, double alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw std::invalid_argument("stable index must lie in (0, 2]");
  const double v = std::numbers::pi * (rng.uniform() - 0.5);
  const double w = rng.exponential();
  if (alpha == 1.0) return std::tan(v);
  return std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha) *
         std::pow(std::cos(v - alpha * v) / w, (1.0 - alpha) / alpha);
}

double sample_one_sided_stable(Rng& rng, double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("one-sided stable index must lie in (0, 1)");
  const double u = std::numbers::pi * rng.uniform();
  const double w = rng.exponential();
  // Kanter's A(u) = (sin(beta u)^beta sin((1 - beta) u)^(1 - beta) / sin u)^(1 / (1 - beta)).
  const double a = std::pow(std::sin(beta * u), beta / (1.0 - beta)) * std::sin((1.0 - beta) * u) /
                   std::pow(std::sin(u), 1.0 / (1.0 - beta));
  return std::pow(a / w, (1.0 - beta) / beta);
}

}  // namespace ctrw
