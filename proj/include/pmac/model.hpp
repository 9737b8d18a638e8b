// Core model for decentralized power control on parallel multiple-access
// channels: K transmitters share S orthogonal channels against a single
// receiver. Defines the game configuration, gain/power containers, SINR,
// per-player spectral efficiency, the network spectral efficiency (NSE),
// and the exact potential function whose unilateral differences equal
// utility differences.
#pragma once

#include <cstdint>
#include <vector>

namespace pmac {

// Numerical guards used across the library.
inline constexpr double kFeasibilitySlack = 1e-9;   // power budget slack
inline constexpr double kPotentialIdentityTol = 1e-10;

// Static description of one game instance (players, channels, budgets,
// noise). Channel s has bandwidth bandwidths[s] and noise power
// noise_density * bandwidths[s]; utilities weigh channel rates by the
// bandwidth fraction bandwidths[s] / total_bandwidth().
struct GameConfig {
  int num_players = 0;                // K >= 1
  int num_channels = 0;               // S >= 1
  std::vector<double> max_power;      // per-player transmit budget, size K, > 0
  double noise_density = 0.0;         // N0 > 0
  std::vector<double> bandwidths;     // per-channel bandwidth, size S, > 0

  double total_bandwidth() const;               // sum of bandwidths
  double band_fraction(int s) const;            // bandwidths[s] / total
  double noise_power(int s) const;              // noise_density * bandwidths[s]

  // Throws std::invalid_argument on non-positive sizes, budgets,
  // bandwidths, or noise density.
  void validate() const;
};

// Row-major K x S matrix of nonnegative channel power gains.
struct GainMatrix {
  int num_players = 0;
  int num_channels = 0;
  std::vector<double> values;  // size K*S, row k = player k

  double at(int k, int s) const { return values[static_cast<std::size_t>(k) * num_channels + s]; }
  double& at(int k, int s) { return values[static_cast<std::size_t>(k) * num_channels + s]; }

  void validate() const;  // sizes consistent, entries finite and >= 0
};

// Row-major K x S matrix of transmit powers (one row per player).
struct PowerProfile {
  int num_players = 0;
  int num_channels = 0;
  std::vector<double> values;  // size K*S, >= 0

  double at(int k, int s) const { return values[static_cast<std::size_t>(k) * num_channels + s]; }
  double& at(int k, int s) { return values[static_cast<std::size_t>(k) * num_channels + s]; }

  double row_sum(int k) const;

  static PowerProfile zeros(int num_players, int num_channels);
};

// Pure channel-selection action profile: choices[k] in {1..S} is the single
// channel player k transmits on (at full budget). Channel numbering is
// 1-based in this container and in all serialized output; function
// parameters for player/channel positions are 0-based.
struct CsProfile {
  std::vector<int> choices;

  int num_players() const { return static_cast<int>(choices.size()); }
  bool operator==(const CsProfile&) const = default;
};

// Throws std::invalid_argument if matrix dimensions disagree with cfg.
void validate_dimensions(const GameConfig& cfg, const GainMatrix& gains);
void validate_dimensions(const GameConfig& cfg, const PowerProfile& profile);

// True if every entry is >= 0 and every row sum is <= budget + slack.
bool is_feasible(const PowerProfile& profile, const GameConfig& cfg,
                 double slack = kFeasibilitySlack);

// SINR of player k on channel s: p_ks g_ks / (noise_s + sum_{j != k} p_js g_js).
double sinr(const PowerProfile& profile, const GainMatrix& gains,
            const GameConfig& cfg, int k, int s);

// Player k's utility: sum_s band_fraction(s) * log2(1 + sinr(k, s)). Bits/s/Hz.
double utility(const PowerProfile& profile, const GainMatrix& gains,
               const GameConfig& cfg, int k);

// Network spectral efficiency: sum over players of utility().
double nse(const PowerProfile& profile, const GainMatrix& gains,
           const GameConfig& cfg);

// Exact potential: sum_s band_fraction(s) * log2(noise_s + sum_k p_ks g_ks).
// For any unilateral deviation, the potential difference equals the deviating
// player's utility difference.
double potential(const PowerProfile& profile, const GainMatrix& gains,
                 const GameConfig& cfg);

// Expands a channel-selection profile into the power profile that puts each
// player's whole budget on its chosen channel.
PowerProfile cs_to_power(const CsProfile& choices, const GameConfig& cfg);

// Inverse of cs_to_power for profiles where each player has exactly one
// positive entry. Throws std::invalid_argument otherwise.
CsProfile power_to_cs(const PowerProfile& profile, const GameConfig& cfg);

}  // namespace pmac
