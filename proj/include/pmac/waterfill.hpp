// Water-filling best responses and Nash equilibria of the power-allocation
// game: each player spreads its budget across channels to maximize its own
// bandwidth-weighted rate, treating the other players' signals as noise.
// Because the game admits an exact potential, round-robin best-response
// iteration converges to a Nash equilibrium.
#pragma once

#include <vector>

#include "pmac/model.hpp"

namespace pmac {

struct WaterfillParams {
  // Absolute tolerance on the allocated-budget residual in the water-level
  // bisection for a single best response.
  double bisection_tolerance = 1e-12;
  int max_bisection_iters = 200;
  // Convergence threshold on the max-norm change of the whole profile over
  // one round of best responses.
  double br_sweep_tolerance = 1e-9;
  int max_rounds = 10000;
};

// Result of the generic weighted water-filling problem:
//   maximize sum_s weights[s] * log(floors[s] + alloc[s])   (equivalently
//   alloc[s] = max(0, weights[s] * level - floors[s]))  s.t. sum alloc = budget.
struct WaterfillAllocation {
  std::vector<double> alloc;
  double level = 0.0;     // common water level (marginal-value reciprocal)
  double residual = 0.0;  // |sum(alloc) - budget| after refinement
};

// Solves the weighted water-filling problem by bisection on the level inside
// the bracket [min_s floors/weights, max_s (floors + budget)/weights],
// followed by an exact closed-form refinement on the final active set so the
// budget constraint holds to machine precision. weights must be positive,
// floors nonnegative and finite, budget >= 0. Throws NonConvergence if the
// bisection budget is exhausted before the tolerance is met.
WaterfillAllocation weighted_waterfill(const std::vector<double>& weights,
                                       const std::vector<double>& floors,
                                       double budget,
                                       double tolerance = 1e-12,
                                       int max_iters = 200);

// Player k's best response given the other rows of `profile` (row k is
// ignored). Channels where player k has zero gain receive zero power; a
// player whose whole gain row is zero gets the all-zero response.
std::vector<double> waterfill_best_response(const PowerProfile& profile,
                                            const GainMatrix& gains,
                                            const GameConfig& cfg, int k,
                                            const WaterfillParams& params = {});

struct PaSolution {
  PowerProfile profile;
  int rounds = 0;          // best-response rounds actually performed
  double residual = 0.0;   // max-norm profile change in the last round
  bool converged = false;
  int inactive_players = 0;  // players with an all-zero gain row
};

// Computes a power-allocation Nash equilibrium by sequential (round-robin)
// best responses from the uniform split p_max/S, or from *initial if given.
// converged=false (with the last iterate) if max_rounds is exhausted.
PaSolution solve_pa_ne(const GainMatrix& gains, const GameConfig& cfg,
                       const WaterfillParams& params = {},
                       const PowerProfile* initial = nullptr);

struct NeResidualReport {
  double max_residual = 0.0;  // largest max-norm distance from any player's BR
  int worst_player = -1;
  bool is_ne = false;         // max_residual <= tolerance
};

// Measures how far `profile` is from being a Nash equilibrium: for each
// player, the max-norm difference between its row and its best response.
NeResidualReport verify_pa_ne(const PowerProfile& profile,
                              const GainMatrix& gains, const GameConfig& cfg,
                              double tolerance = 1e-8,
                              const WaterfillParams& params = {});

}  // namespace pmac
