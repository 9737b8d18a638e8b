#include "pmac/waterfill.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pmac/errors.hpp"

namespace pmac {

WaterfillAllocation weighted_waterfill(const std::vector<double>& weights,
                                       const std::vector<double>& floors,
                                       double budget, double tolerance,
                                       int max_iters) {
  const std::size_t n = weights.size();
  if (n == 0 || floors.size() != n)
    throw std::invalid_argument("waterfill: weights/floors size mismatch or empty");
  for (std::size_t s = 0; s < n; ++s) {
    if (!(weights[s] > 0.0) || !std::isfinite(weights[s]))
      throw std::invalid_argument("waterfill: weights must be positive");
    if (!(floors[s] >= 0.0) || !std::isfinite(floors[s]))
      throw std::invalid_argument("waterfill: floors must be nonnegative");
  }
  if (!(budget >= 0.0) || !std::isfinite(budget))
    throw std::invalid_argument("waterfill: budget must be nonnegative");

  WaterfillAllocation result;
  result.alloc.assign(n, 0.0);

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < n; ++s) {
    lo = std::min(lo, floors[s] / weights[s]);
    hi = std::max(hi, (floors[s] + budget) / weights[s]);
  }
  if (budget == 0.0) {
    result.level = lo;
    return result;
  }

  const auto allocated = [&](double level) {
    double total = 0.0;
    for (std::size_t s = 0; s < n; ++s)
      total += std::max(0.0, weights[s] * level - floors[s]);
    return total;
  };

  // allocated() is continuous and nondecreasing with allocated(lo) == 0 and
  // allocated(hi) >= budget (the channel attaining hi already gets budget).
  double level = 0.5 * (lo + hi);
  for (int it = 0; it < max_iters; ++it) {
    level = 0.5 * (lo + hi);
    const double total = allocated(level);
    if (std::abs(total - budget) <= tolerance) break;
    if (total < budget)
      lo = level;
    else
      hi = level;
  }

  // Exact closed-form refinement on the active set found by bisection:
  // level = (budget + sum_active floors) / sum_active weights.
  double weight_sum = 0.0, floor_sum = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    if (weights[s] * level - floors[s] > 0.0) {
      weight_sum += weights[s];
      floor_sum += floors[s];
    }
  }
  if (weight_sum > 0.0) {
    const double refined = (budget + floor_sum) / weight_sum;
    // Accept only if it keeps the same active set (it almost always does);
    // otherwise the bisection level is already within tolerance.
    bool consistent = true;
    for (std::size_t s = 0; s < n; ++s) {
      const bool was_active = weights[s] * level - floors[s] > 0.0;
      const bool is_active = weights[s] * refined - floors[s] > 0.0;
      if (was_active != is_active) {
        consistent = false;
        break;
      }
    }
    if (consistent) level = refined;
  }

  double total = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    result.alloc[s] = std::max(0.0, weights[s] * level - floors[s]);
    total += result.alloc[s];
  }
  result.level = level;
  result.residual = std::abs(total - budget);

  const double scale = std::max(1.0, budget);
  if (result.residual > std::max(tolerance, 1e-9 * scale))
    throw NonConvergence("waterfill bisection did not meet tolerance",
                         result.residual);
  return result;
}

std::vector<double> waterfill_best_response(const PowerProfile& profile,
                                            const GainMatrix& gains,
                                            const GameConfig& cfg, int k,
                                            const WaterfillParams& params) {
  const int S = cfg.num_channels;
  std::vector<double> response(S, 0.0);

  std::vector<double> weights, floors;
  std::vector<int> channels;
  weights.reserve(S);
  floors.reserve(S);
  channels.reserve(S);
  for (int s = 0; s < S; ++s) {
    const double g = gains.at(k, s);
    if (g <= 0.0) continue;  // a dead channel never receives power
    double interference = cfg.noise_power(s);
    for (int j = 0; j < cfg.num_players; ++j)
      if (j != k) interference += profile.at(j, s) * gains.at(j, s);
    weights.push_back(cfg.band_fraction(s));
    floors.push_back(interference / g);
    channels.push_back(s);
  }
  if (channels.empty()) return response;  // player has no usable channel

  const WaterfillAllocation alloc =
      weighted_waterfill(weights, floors, cfg.max_power[k],
                         params.bisection_tolerance, params.max_bisection_iters);
  for (std::size_t i = 0; i < channels.size(); ++i)
    response[channels[i]] = alloc.alloc[i];
  return response;
}

PaSolution solve_pa_ne(const GainMatrix& gains, const GameConfig& cfg,
                       const WaterfillParams& params,
                       const PowerProfile* initial) {
  cfg.validate();
  gains.validate();
  validate_dimensions(cfg, gains);

  PaSolution solution;
  const int K = cfg.num_players;
  const int S = cfg.num_channels;

  if (initial != nullptr) {
    validate_dimensions(cfg, *initial);
    if (!is_feasible(*initial, cfg))
      throw std::invalid_argument("solve_pa_ne: infeasible initial profile");
    solution.profile = *initial;
  } else {
    solution.profile = PowerProfile::zeros(K, S);
    for (int k = 0; k < K; ++k)
      for (int s = 0; s < S; ++s)
        solution.profile.at(k, s) = cfg.max_power[k] / S;
  }

  for (int k = 0; k < K; ++k) {
    bool active = false;
    for (int s = 0; s < S; ++s)
      if (gains.at(k, s) > 0.0) active = true;
    if (!active) ++solution.inactive_players;
  }

  for (int round = 0; round < params.max_rounds; ++round) {
    double change = 0.0;
    for (int k = 0; k < K; ++k) {
      const std::vector<double> br =
          waterfill_best_response(solution.profile, gains, cfg, k, params);
      for (int s = 0; s < S; ++s) {
        change = std::max(change, std::abs(br[s] - solution.profile.at(k, s)));
        solution.profile.at(k, s) = br[s];
      }
    }
    solution.rounds = round + 1;
    solution.residual = change;
    if (change < params.br_sweep_tolerance) {
      solution.converged = true;
      break;
    }
  }
  return solution;
}

NeResidualReport verify_pa_ne(const PowerProfile& profile,
                              const GainMatrix& gains, const GameConfig& cfg,
                              double tolerance,
                              const WaterfillParams& params) {
  validate_dimensions(cfg, profile);
  validate_dimensions(cfg, gains);

  NeResidualReport report;
  for (int k = 0; k < cfg.num_players; ++k) {
    const std::vector<double> br =
        waterfill_best_response(profile, gains, cfg, k, params);
    double distance = 0.0;
    for (int s = 0; s < cfg.num_channels; ++s)
      distance = std::max(distance, std::abs(br[s] - profile.at(k, s)));
    if (distance > report.max_residual) {
      report.max_residual = distance;
      report.worst_player = k;
    }
  }
  report.is_ne = report.max_residual <= tolerance;
  return report;
}

}  // namespace pmac
