#include "pmac/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pmac {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

double GameConfig::total_bandwidth() const {
  double total = 0.0;
  for (double b : bandwidths) total += b;
  return total;
}

double GameConfig::band_fraction(int s) const {
  return bandwidths[s] / total_bandwidth();
}

double GameConfig::noise_power(int s) const {
  return noise_density * bandwidths[s];
}

void GameConfig::validate() const {
  require(num_players >= 1, "config: need at least one player");
  require(num_channels >= 1, "config: need at least one channel");
  require(static_cast<int>(max_power.size()) == num_players,
          "config: max_power size must equal the player count");
  require(static_cast<int>(bandwidths.size()) == num_channels,
          "config: bandwidths size must equal the channel count");
  require(std::isfinite(noise_density) && noise_density > 0.0,
          "config: noise density must be positive");
  for (double p : max_power)
    require(std::isfinite(p) && p > 0.0, "config: power budgets must be positive");
  for (double b : bandwidths)
    require(std::isfinite(b) && b > 0.0, "config: bandwidths must be positive");
}

void GainMatrix::validate() const {
  require(num_players >= 1 && num_channels >= 1, "gains: empty matrix");
  require(values.size() ==
              static_cast<std::size_t>(num_players) * num_channels,
          "gains: value count must be K*S");
  for (double g : values)
    require(std::isfinite(g) && g >= 0.0, "gains: entries must be finite and >= 0");
}

double PowerProfile::row_sum(int k) const {
  double total = 0.0;
  for (int s = 0; s < num_channels; ++s) total += at(k, s);
  return total;
}

PowerProfile PowerProfile::zeros(int num_players, int num_channels) {
  PowerProfile p;
  p.num_players = num_players;
  p.num_channels = num_channels;
  p.values.assign(static_cast<std::size_t>(num_players) * num_channels, 0.0);
  return p;
}

void validate_dimensions(const GameConfig& cfg, const GainMatrix& gains) {
  if (gains.num_players != cfg.num_players ||
      gains.num_channels != cfg.num_channels)
    throw std::invalid_argument("gain matrix dimensions do not match config");
}

void validate_dimensions(const GameConfig& cfg, const PowerProfile& profile) {
  if (profile.num_players != cfg.num_players ||
      profile.num_channels != cfg.num_channels)
    throw std::invalid_argument("power profile dimensions do not match config");
}

bool is_feasible(const PowerProfile& profile, const GameConfig& cfg,
                 double slack) {
  if (profile.num_players != cfg.num_players ||
      profile.num_channels != cfg.num_channels)
    return false;
  for (double v : profile.values)
    if (!(v >= 0.0) || !std::isfinite(v)) return false;
  for (int k = 0; k < cfg.num_players; ++k)
    if (profile.row_sum(k) > cfg.max_power[k] + slack) return false;
  return true;
}

double sinr(const PowerProfile& profile, const GainMatrix& gains,
            const GameConfig& cfg, int k, int s) {
  const double signal = profile.at(k, s) * gains.at(k, s);
  if (signal == 0.0) return 0.0;
  double interference = cfg.noise_power(s);
  for (int j = 0; j < cfg.num_players; ++j)
    if (j != k) interference += profile.at(j, s) * gains.at(j, s);
  return signal / interference;
}

double utility(const PowerProfile& profile, const GainMatrix& gains,
               const GameConfig& cfg, int k) {
  double total = 0.0;
  for (int s = 0; s < cfg.num_channels; ++s)
    total += cfg.band_fraction(s) * std::log2(1.0 + sinr(profile, gains, cfg, k, s));
  return total;
}

double nse(const PowerProfile& profile, const GainMatrix& gains,
           const GameConfig& cfg) {
  double total = 0.0;
  for (int k = 0; k < cfg.num_players; ++k)
    total += utility(profile, gains, cfg, k);
  return total;
}

double potential(const PowerProfile& profile, const GainMatrix& gains,
                 const GameConfig& cfg) {
  double total = 0.0;
  for (int s = 0; s < cfg.num_channels; ++s) {
    double received = cfg.noise_power(s);
    for (int k = 0; k < cfg.num_players; ++k)
      received += profile.at(k, s) * gains.at(k, s);
    total += cfg.band_fraction(s) * std::log2(received);
  }
  return total;
}

PowerProfile cs_to_power(const CsProfile& choices, const GameConfig& cfg) {
  if (choices.num_players() != cfg.num_players)
    throw std::invalid_argument("channel choices do not match the player count");
  PowerProfile p = PowerProfile::zeros(cfg.num_players, cfg.num_channels);
  for (int k = 0; k < cfg.num_players; ++k) {
    const int c = choices.choices[k];
    if (c < 1 || c > cfg.num_channels)
      throw std::invalid_argument("channel choice out of range: " + std::to_string(c));
    p.at(k, c - 1) = cfg.max_power[k];
  }
  return p;
}

CsProfile power_to_cs(const PowerProfile& profile, const GameConfig& cfg) {
  validate_dimensions(cfg, profile);
  CsProfile choices;
  choices.choices.resize(cfg.num_players);
  for (int k = 0; k < cfg.num_players; ++k) {
    int chosen = -1;
    for (int s = 0; s < cfg.num_channels; ++s) {
      if (profile.at(k, s) > 0.0) {
        if (chosen >= 0)
          throw std::invalid_argument(
              "profile row has multiple positive entries; not a channel selection");
        chosen = s;
      }
    }
    if (chosen < 0)
      throw std::invalid_argument("profile row is all zero; not a channel selection");
    choices.choices[k] = chosen + 1;
  }
  return choices;
}

}  // namespace pmac
