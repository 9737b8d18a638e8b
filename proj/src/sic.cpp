#include "pmac/sic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pmac/errors.hpp"

namespace pmac {

DecodingOrder DecodingOrder::identity(int num_players) {
  DecodingOrder order;
  order.order.resize(num_players);
  std::iota(order.order.begin(), order.order.end(), 1);
  return order;
}

void DecodingOrder::validate(int num_players) const {
  if (static_cast<int>(order.size()) != num_players)
    throw std::invalid_argument("decoding order: wrong length");
  std::vector<bool> seen(num_players, false);
  for (int p : order) {
    if (p < 1 || p > num_players || seen[p - 1])
      throw std::invalid_argument("decoding order: not a permutation of 1..K");
    seen[p - 1] = true;
  }
}

double sic_nse(const PowerProfile& profile, const GainMatrix& gains,
               const GameConfig& cfg) {
  validate_dimensions(cfg, profile);
  validate_dimensions(cfg, gains);
  double total = 0.0;
  for (int s = 0; s < cfg.num_channels; ++s) {
    double received = 0.0;
    for (int k = 0; k < cfg.num_players; ++k)
      received += profile.at(k, s) * gains.at(k, s);
    total += cfg.band_fraction(s) * std::log2(1.0 + received / cfg.noise_power(s));
  }
  return total;
}

SicReport sic_user_rates(const PowerProfile& profile, const GainMatrix& gains,
                         const GameConfig& cfg, const DecodingOrder& order) {
  validate_dimensions(cfg, profile);
  validate_dimensions(cfg, gains);
  order.validate(cfg.num_players);

  SicReport report;
  report.per_user_rates.assign(cfg.num_players, 0.0);
  report.order = order.order;

  // Walk the order backwards accumulating the interference of
  // not-yet-decoded users: the player at position i only sees players at
  // positions > i.
  std::vector<double> pending(cfg.num_channels, 0.0);
  for (int pos = cfg.num_players - 1; pos >= 0; --pos) {
    const int k = order.order[pos] - 1;
    double rate = 0.0;
    for (int s = 0; s < cfg.num_channels; ++s) {
      const double signal = profile.at(k, s) * gains.at(k, s);
      if (signal > 0.0)
        rate += cfg.band_fraction(s) *
                std::log2(1.0 + signal / (cfg.noise_power(s) + pending[s]));
    }
    report.per_user_rates[k] = rate;
    for (int s = 0; s < cfg.num_channels; ++s)
      pending[s] += profile.at(k, s) * gains.at(k, s);
  }

  report.sum_rate = 0.0;
  for (double r : report.per_user_rates) report.sum_rate += r;
  report.potential_identity_residual =
      std::abs(report.sum_rate - sic_nse(profile, gains, cfg));
  return report;
}

SicReport sic_capacity_at_ne(const GainMatrix& gains, const GameConfig& cfg,
                             char game, const DecodingOrder* order,
                             std::uint64_t cap, const WaterfillParams& params,
                             std::uint64_t descent_seed) {
  cfg.validate();
  gains.validate();
  validate_dimensions(cfg, gains);
  const DecodingOrder decode =
      order != nullptr ? *order : DecodingOrder::identity(cfg.num_players);

  if (game == 'a') {
    const PaSolution solution = solve_pa_ne(gains, cfg, params);
    if (!solution.converged)
      throw NonConvergence("power-allocation solve did not converge",
                           solution.residual);
    return sic_user_rates(solution.profile, gains, cfg, decode);
  }
  if (game != 'b')
    throw std::invalid_argument("sic_capacity_at_ne: game must be 'a' or 'b'");

  // Channel-selection game: evaluate at the potential-maximizing equilibrium
  // (enumerated when feasible, otherwise a best-response descent sink).
  CsProfile chosen;
  bool sampled = false;
  try {
    const NeReport report = enumerate_cs_ne(gains, cfg, 0.0, cap);
    const NeEntry* best = nullptr;
    for (const NeEntry& entry : report.equilibria)
      if (best == nullptr || entry.potential > best->potential) best = &entry;
    if (best == nullptr)
      throw std::runtime_error("enumeration returned no equilibrium");
    chosen = best->profile;
  } catch (const CapExceeded&) {
    RandomStream rng(descent_seed, 0x51c0de);
    const DescentResult descent = br_descent_sink(
        gains, cfg, random_cs_profile(cfg.num_players, cfg.num_channels, rng));
    if (!descent.converged)
      throw NonConvergence("best-response descent did not converge", 1.0);
    chosen = descent.profile;
    sampled = true;
  }
  SicReport report =
      sic_user_rates(cs_to_power(chosen, cfg), gains, cfg, decode);
  report.sampled = sampled;
  return report;
}

}  // namespace pmac
