#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pmac/errors.hpp"
#include "pmac/model.hpp"
#include "pmac/rng.hpp"
#include "pmac/waterfill.hpp"

namespace {

pmac::GameConfig make_config(int K, int S, double noise_density = 1.0) {
  pmac::GameConfig cfg;
  cfg.num_players = K;
  cfg.num_channels = S;
  cfg.max_power.assign(K, 1.0);
  cfg.noise_density = noise_density;
  cfg.bandwidths.assign(S, 1.0);
  return cfg;
}

pmac::GainMatrix make_gains(int K, int S, std::initializer_list<double> v) {
  pmac::GainMatrix g;
  g.num_players = K;
  g.num_channels = S;
  g.values = v;
  return g;
}

}  // namespace

TEST_CASE("generic water-filling: both channels active, exact budget") {
  // weights (1,1), floors (0.5, 1): level 1.25, alloc (0.75, 0.25).
  const auto r = pmac::weighted_waterfill({1.0, 1.0}, {0.5, 1.0}, 1.0);
  CHECK(r.alloc[0] == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(r.alloc[1] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(r.level == doctest::Approx(1.25).epsilon(1e-14));
  CHECK(r.residual <= 1e-12);
  CHECK(r.alloc[0] + r.alloc[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("generic water-filling: expensive channel shut off") {
  // Floors (0.1, 50): all budget goes to the first channel.
  const auto r = pmac::weighted_waterfill({1.0, 1.0}, {0.1, 50.0}, 2.0);
  CHECK(r.alloc[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(r.alloc[1] == 0.0);
}

TEST_CASE("generic water-filling: weighted levels") {
  // alloc_s = w_s * level - f_s on active channels.
  const std::vector<double> w{2.0, 1.0}, f{1.0, 1.0};
  const auto r = pmac::weighted_waterfill(w, f, 3.0);
  for (int s = 0; s < 2; ++s)
    if (r.alloc[s] > 0)
      CHECK(r.alloc[s] == doctest::Approx(w[s] * r.level - f[s]).epsilon(1e-12));
  CHECK(r.alloc[0] + r.alloc[1] == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("generic water-filling: zero budget and input validation") {
  const auto r = pmac::weighted_waterfill({1.0}, {0.5}, 0.0);
  CHECK(r.alloc[0] == 0.0);
  CHECK_THROWS_AS(pmac::weighted_waterfill({0.0}, {0.5}, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(pmac::weighted_waterfill({1.0}, {-0.5}, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(pmac::weighted_waterfill({1.0}, {0.5, 0.5}, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(pmac::weighted_waterfill({1.0}, {0.5}, -1.0),
                  std::invalid_argument);
}

TEST_CASE("single-player best response matches the closed form") {
  // Gains (4, 1), unit noise, budget 1, equal bands: response (7/8, 1/8).
  pmac::GameConfig cfg = make_config(1, 2);
  pmac::GainMatrix g = make_gains(1, 2, {4.0, 1.0});
  const pmac::PowerProfile empty = pmac::PowerProfile::zeros(1, 2);
  const std::vector<double> br = pmac::waterfill_best_response(empty, g, cfg, 0);
  CHECK(br[0] == doctest::Approx(0.875).epsilon(1e-12));
  CHECK(br[1] == doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("best response ignores zero-gain channels") {
  pmac::GameConfig cfg = make_config(1, 3);
  pmac::GainMatrix g = make_gains(1, 3, {2.0, 0.0, 1.0});
  const pmac::PowerProfile empty = pmac::PowerProfile::zeros(1, 3);
  const std::vector<double> br = pmac::waterfill_best_response(empty, g, cfg, 0);
  CHECK(br[1] == 0.0);
  CHECK(br[0] + br[2] == doctest::Approx(1.0).epsilon(1e-12));

  pmac::GainMatrix dead = make_gains(1, 3, {0.0, 0.0, 0.0});
  const std::vector<double> none =
      pmac::waterfill_best_response(empty, dead, cfg, 0);
  CHECK(none == std::vector<double>{0.0, 0.0, 0.0});
}

TEST_CASE("equilibrium solver reproduces closed-form 2x2 equilibria") {
  pmac::GameConfig cfg = make_config(2, 2);

  SUBCASE("interior for one player") {
    // Gains ((1,2),(3,4)) at unit SNR: player 1 all on channel 2,
    // player 2 splits (1 - 7/24, 7/24).
    pmac::GainMatrix g = make_gains(2, 2, {1.0, 2.0, 3.0, 4.0});
    const pmac::PaSolution sol = pmac::solve_pa_ne(g, cfg);
    REQUIRE(sol.converged);
    CHECK(sol.profile.at(0, 0) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(sol.profile.at(0, 1) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sol.profile.at(1, 0) == doctest::Approx(17.0 / 24.0).epsilon(1e-8));
    CHECK(sol.profile.at(1, 1) == doctest::Approx(7.0 / 24.0).epsilon(1e-8));
  }

  SUBCASE("interior for the other player") {
    // Gains ((2,0.5),(1.5,0.6)) at unit SNR: player 1 all on channel 1,
    // player 2 splits (1/3, 2/3).
    pmac::GainMatrix g = make_gains(2, 2, {2.0, 0.5, 1.5, 0.6});
    const pmac::PaSolution sol = pmac::solve_pa_ne(g, cfg);
    REQUIRE(sol.converged);
    CHECK(sol.profile.at(0, 0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sol.profile.at(1, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-8));
    CHECK(sol.profile.at(1, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-8));
  }

  SUBCASE("orthogonal corner") {
    pmac::GainMatrix g = make_gains(2, 2, {4.0, 1.0, 1.0, 4.0});
    const pmac::PaSolution sol = pmac::solve_pa_ne(g, cfg);
    REQUIRE(sol.converged);
    CHECK(sol.profile.at(0, 0) == doctest::Approx(1.0));
    CHECK(sol.profile.at(1, 1) == doctest::Approx(1.0));
  }
}

TEST_CASE("solver solutions saturate budgets and verify as equilibria") {
  pmac::RandomStream rng(11, 0);
  for (int instance = 0; instance < 100; ++instance) {
    const int K = 2 + static_cast<int>(rng.next_below(3));
    const int S = 2 + static_cast<int>(rng.next_below(2));
    const double snr = std::pow(10.0, -1.0 + 3.0 * rng.next_uniform());
    pmac::GameConfig cfg = make_config(K, S, 1.0 / snr);
    pmac::GainMatrix g;
    g.num_players = K;
    g.num_channels = S;
    for (int i = 0; i < K * S; ++i) g.values.push_back(rng.next_exp1());

    const pmac::PaSolution sol = pmac::solve_pa_ne(g, cfg);
    REQUIRE(sol.converged);
    CHECK(sol.residual <= 1e-9);
    for (int k = 0; k < K; ++k)
      CHECK(std::abs(sol.profile.row_sum(k) - cfg.max_power[k]) <= 1e-8);
    const pmac::NeResidualReport report =
        pmac::verify_pa_ne(sol.profile, g, cfg);
    CHECK(report.is_ne);
    CHECK(report.max_residual <= 1e-8);
  }
}

TEST_CASE("equilibrium verification flags non-equilibria") {
  pmac::GameConfig cfg = make_config(2, 2);
  pmac::GainMatrix g = make_gains(2, 2, {4.0, 1.0, 1.0, 4.0});
  pmac::PowerProfile uniform = pmac::PowerProfile::zeros(2, 2);
  uniform.at(0, 0) = uniform.at(0, 1) = 0.5;
  uniform.at(1, 0) = uniform.at(1, 1) = 0.5;
  const pmac::NeResidualReport report = pmac::verify_pa_ne(uniform, g, cfg);
  CHECK_FALSE(report.is_ne);
  CHECK(report.max_residual > 0.1);
  CHECK(report.worst_player >= 0);
}

TEST_CASE("solver accepts a caller-supplied starting profile") {
  pmac::GameConfig cfg = make_config(2, 2);
  pmac::GainMatrix g = make_gains(2, 2, {4.0, 1.0, 1.0, 4.0});
  pmac::PowerProfile start = pmac::PowerProfile::zeros(2, 2);
  start.at(0, 1) = 1.0;  // deliberately on the wrong channel
  start.at(1, 0) = 1.0;
  const pmac::PaSolution sol = pmac::solve_pa_ne(g, cfg, {}, &start);
  REQUIRE(sol.converged);
  CHECK(sol.profile.at(0, 0) == doctest::Approx(1.0));
  CHECK(sol.profile.at(1, 1) == doctest::Approx(1.0));

  pmac::PowerProfile infeasible = start;
  infeasible.at(0, 0) = 1.0;  // row sum 2 > budget
  CHECK_THROWS_AS(pmac::solve_pa_ne(g, cfg, {}, &infeasible),
                  std::invalid_argument);
}

TEST_CASE("round limit reports non-convergence instead of looping") {
  pmac::GameConfig cfg = make_config(3, 3, 1e-4);  // 40 dB coupling
  pmac::GainMatrix g;
  g.num_players = 3;
  g.num_channels = 3;
  pmac::RandomStream rng(5, 1);
  for (int i = 0; i < 9; ++i) g.values.push_back(rng.next_exp1());
  pmac::WaterfillParams params;
  params.max_rounds = 1;  // deliberately too few
  const pmac::PaSolution sol = pmac::solve_pa_ne(g, cfg, params);
  CHECK_FALSE(sol.converged);
  CHECK(sol.rounds == 1);
  CHECK(sol.residual > 0.0);
}
