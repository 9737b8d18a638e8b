// Successive interference cancellation at the receiver: with a fixed
// decoding order, each user is decoded against the interference of the
// not-yet-decoded users only, and the per-user rates telescope to the
// multiple-access sum capacity of the current power profile.
#pragma once

#include <vector>

#include "pmac/enumerate.hpp"
#include "pmac/model.hpp"
#include "pmac/waterfill.hpp"

namespace pmac {

// Decoding order: order[i] is the 1-based player decoded at position i+1
// (position 0 decoded first, against everyone else's interference).
struct DecodingOrder {
  std::vector<int> order;

  static DecodingOrder identity(int num_players);
  void validate(int num_players) const;  // throws std::invalid_argument
};

struct SicReport {
  std::vector<double> per_user_rates;  // indexed by player (0-based position k = player k+1)
  double sum_rate = 0.0;
  double potential_identity_residual = 0.0;  // |sum_rate - sic_nse|
  std::vector<int> order;                    // the decoding order used
  bool sampled = false;  // game-b capacity came from descent sampling, not enumeration
};

// Sum rate achievable with perfect SIC at power profile p:
//   sum_s band_fraction(s) * log2(1 + sum_k p_ks g_ks / noise_s),
// which also equals potential(p) - sum_s band_fraction(s) * log2(noise_s).
double sic_nse(const PowerProfile& profile, const GainMatrix& gains,
               const GameConfig& cfg);

// Per-user SIC rates under a decoding order: the user at position i sees
// interference only from users decoded after it. Rates telescope: their sum
// equals sic_nse for every order.
SicReport sic_user_rates(const PowerProfile& profile, const GainMatrix& gains,
                         const GameConfig& cfg, const DecodingOrder& order);

// SIC rates at a Nash equilibrium of the chosen game: 'a' solves the
// power-allocation game; 'b' enumerates channel-selection equilibria and
// evaluates at the potential-maximizing one (falling back to a best-response
// descent sink, flagged sampled=true, when enumeration would exceed cap).
SicReport sic_capacity_at_ne(const GainMatrix& gains, const GameConfig& cfg,
                             char game, const DecodingOrder* order = nullptr,
                             std::uint64_t cap = kDefaultEnumerationCap,
                             const WaterfillParams& params = {},
                             std::uint64_t descent_seed = 0);

}  // namespace pmac
