#include "pmac/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pmac/waterfill.hpp"

namespace pmac {

void LargeSystemParams::validate() const {
  if (b.empty() || omega.size() != b.size())
    throw std::invalid_argument("large-system params: b/omega sizes");
  if (!(mu > 0.0) || !(p_max > 0.0) || !(noise_density > 0.0))
    throw std::invalid_argument("large-system params: mu, p_max, N0 must be positive");
  double total = 0.0;
  for (double v : b) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument("large-system params: fractions must be positive");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("large-system params: fractions must sum to 1");
  for (double v : omega)
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument("large-system params: mean gains must be positive");
}

double asymptotic_potential(const std::vector<double>& fractions,
                            const LargeSystemParams& params) {
  params.validate();
  if (fractions.size() != params.b.size())
    throw std::invalid_argument("asymptotic potential: fraction vector size");
  double total = 0.0;
  for (std::size_t s = 0; s < fractions.size(); ++s) {
    if (!(fractions[s] >= 0.0))
      throw std::invalid_argument("asymptotic potential: fractions must be >= 0");
    total += params.b[s] *
             std::log2(params.mu * params.noise_density * params.b[s] +
                       fractions[s] * params.p_max * params.omega[s]);
  }
  return total;
}

std::vector<double> solve_fractions(const LargeSystemParams& params,
                                    double tolerance) {
  params.validate();
  const std::size_t S = params.b.size();
  // Substituting x_s = b_s * (level - c_s)^+ with c_s = mu*N0/(p_max*Omega_s)
  // turns the simplex-constrained maximization into weighted water-filling
  // with weights b and floors b_s * c_s.
  std::vector<double> floors(S);
  for (std::size_t s = 0; s < S; ++s)
    floors[s] = params.b[s] * params.mu * params.noise_density /
                (params.p_max * params.omega[s]);
  const WaterfillAllocation alloc =
      weighted_waterfill(params.b, floors, 1.0, tolerance, 400);
  return alloc.alloc;
}

std::vector<double> empirical_fractions(const CsProfile& profile,
                                        int num_channels) {
  if (num_channels < 1)
    throw std::invalid_argument("empirical fractions: need channels");
  std::vector<double> x(num_channels, 0.0);
  const int K = profile.num_players();
  if (K == 0) return x;
  for (int c : profile.choices) {
    if (c < 1 || c > num_channels)
      throw std::invalid_argument("empirical fractions: choice out of range");
    x[c - 1] += 1.0;
  }
  for (double& v : x) v /= K;
  return x;
}

double fraction_kkt_residual(const std::vector<double>& fractions,
                             const LargeSystemParams& params) {
  params.validate();
  if (fractions.size() != params.b.size())
    throw std::invalid_argument("kkt residual: fraction vector size");

  // Marginal value of channel s: b_s*p_max*Omega_s / (mu*N0*b_s + x_s*p_max*Omega_s)
  // (log2 scaling omitted: it is common to all channels). Active channels
  // must share a common marginal; inactive ones must not exceed it.
  double sum = 0.0;
  double active_min = 1e300, active_max = -1e300, inactive_max = -1e300;
  for (std::size_t s = 0; s < fractions.size(); ++s) {
    const double x = fractions[s];
    sum += x;
    const double m = params.b[s] * params.p_max * params.omega[s] /
                     (params.mu * params.noise_density * params.b[s] +
                      x * params.p_max * params.omega[s]);
    if (x > 1e-14) {
      active_min = std::min(active_min, m);
      active_max = std::max(active_max, m);
    } else {
      inactive_max = std::max(inactive_max, m);
    }
  }
  double residual = std::abs(sum - 1.0);
  if (active_max >= active_min) {
    const double scale = std::max(active_max, 1e-300);
    residual += (active_max - active_min) / scale;
    if (inactive_max > active_min)
      residual += (inactive_max - active_min) / scale;
  }
  return residual;
}

}  // namespace pmac
