// Large-system (many players, many channels) limit of the channel-selection
// game: with K, S -> infinity at fixed load and per-channel mean gains
// Omega_s, the fraction of players on each channel concentrates on the
// maximizer of a deterministic concave potential, which is itself a weighted
// water-filling problem over channels.
#pragma once

#include <vector>

#include "pmac/model.hpp"

namespace pmac {

// Parameters of the limit problem. b[s] are bandwidth fractions (sum 1),
// omega[s] the per-channel mean gains, mu the load K/S times the reciprocal
// normalization absorbed into the noise term: the limit potential is
//   phi(x) = sum_s b[s] * log2(mu * N0 * b[s] + x[s] * p_max * omega[s])
// over fractions x >= 0 with sum_s x[s] = 1.
struct LargeSystemParams {
  double mu = 1.0;            // inverse load S/K scaling of the noise term
  std::vector<double> b;      // bandwidth fractions, positive, sum to 1
  std::vector<double> omega;  // per-channel mean gains, positive
  double p_max = 1.0;
  double noise_density = 1.0;  // N0

  int num_channels() const { return static_cast<int>(b.size()); }
  void validate() const;  // throws std::invalid_argument
};

// The limit potential evaluated at a fraction vector (entries >= 0; callers
// normally pass sum = 1 but the function itself only needs nonnegativity).
double asymptotic_potential(const std::vector<double>& fractions,
                            const LargeSystemParams& params);

// Maximizes the limit potential over the simplex: the optimum has
// x[s] = b[s] * max(0, level - c_s) with c_s = mu*N0/(p_max*omega[s]),
// computed by the shared weighted water-filling routine. When all omega are
// equal the solution is exactly x = b.
std::vector<double> solve_fractions(const LargeSystemParams& params,
                                    double tolerance = 1e-12);

// Empirical per-channel player fractions of a channel-selection profile.
std::vector<double> empirical_fractions(const CsProfile& profile,
                                        int num_channels);

// KKT residual of a candidate maximizer: active channels must share the same
// marginal value of the potential; returns the max absolute deviation of the
// active marginals from their common value plus any simplex violation.
double fraction_kkt_residual(const std::vector<double>& fractions,
                             const LargeSystemParams& params);

}  // namespace pmac
