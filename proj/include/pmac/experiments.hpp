// Monte-Carlo experiment harness: draws Rayleigh-fading gain matrices with
// deterministic per-trial RNG streams and compares equilibrium performance
// of the continuous power-allocation game and the discrete channel-selection
// game across SNR, load, equilibrium multiplicity, and channel-occupancy
// fractions. Emits plot-ready tables.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pmac/asymptotics.hpp"
#include "pmac/io.hpp"
#include "pmac/model.hpp"
#include "pmac/rng.hpp"

#include "json.hpp"

namespace pmac {

// Declarative experiment description (normally parsed from a JSON file).
struct ExperimentSpec {
  std::string kind;  // nse_vs_snr | nse_vs_load | ne_count_pmf | fractions

  int num_players = 10;                  // K (nse_vs_snr, fractions)
  int num_channels = 4;                  // S (nse_vs_load, ne_count_pmf, fractions)
  std::vector<double> eta_list;          // loads K/S (nse_vs_snr sweeps S, nse_vs_load sweeps K)
  std::vector<double> snr_grid_db;       // per-channel SNR grid in dB
  std::vector<std::pair<int, int>> ks_list;  // explicit (K,S) pairs for ne_count_pmf
  int trials = 500;
  std::uint64_t seed = 1;
  std::string output_path;               // empty = stdout

  // fractions experiment only:
  std::vector<double> bandwidth_fractions;  // b, must sum to 1
  double snr_db = 10.0;

  // exhaustive enumeration is used when S^K <= this; otherwise BR-descent
  // sampling with `descent_starts` random starts (best potential kept).
  std::uint64_t exhaustive_cap = std::uint64_t{1} << 16;
  int descent_starts = 1;
};

ExperimentSpec parse_experiment_spec(const nlohmann::json& j);
ExperimentSpec load_experiment_spec(const std::string& path);

// Uniform-bandwidth instance builder used by the sweeps: S unit-bandwidth
// channels, equal budgets p_max = 1, noise density chosen so each channel's
// SNR p_max / noise_power(s) equals `snr`.
GameConfig uniform_config(int num_players, int num_channels, double snr);

// i.i.d. unit-mean exponential gains (Rayleigh fading power gains),
// deterministic in (seed, stream).
GainMatrix sample_gains(int num_players, int num_channels, RandomStream& rng);

// One gain draw evaluated under both games.
struct TrialResult {
  std::uint64_t draw_index = 0;
  double nse_pa = 0.0;
  double nse_cs_best = 0.0;
  double nse_cs_worst = 0.0;
  std::uint64_t ne_count = 0;
  bool cs_sampled = false;   // best CS NE obtained by descent, not enumeration
  bool pa_converged = true;
  std::vector<double> fractions;  // occupancy fractions of the best CS NE
};

TrialResult run_trial(const GameConfig& cfg, const GainMatrix& gains,
                      std::uint64_t exhaustive_cap, int descent_starts,
                      std::uint64_t seed, std::uint64_t trial_index);

// Aggregated statistics for one grid point of the NSE sweeps.
struct SweepPoint {
  double eta = 0.0;
  int num_players = 0;
  int num_channels = 0;
  double snr_db = 0.0;
  int trials = 0;
  double pa_mean = 0.0, pa_se = 0.0;    // mean and standard error of NSE_pa
  double cs_mean = 0.0, cs_se = 0.0;    // same for best-CS-NE NSE
  bool sampled = false;                 // any trial used descent sampling
};

std::vector<SweepPoint> compute_nse_vs_snr(const ExperimentSpec& spec);
std::vector<SweepPoint> compute_nse_vs_load(const ExperimentSpec& spec);

// Empirical PMF of the equilibrium count for one (K, S, SNR) cell.
struct PmfRow {
  int num_players = 0;
  int num_channels = 0;
  double snr_db = 0.0;
  std::uint64_t ne_count = 0;
  double probability = 0.0;
  int trials = 0;
};

struct PmfStats {
  std::vector<PmfRow> rows;
  std::uint64_t observed_max = 0;
  std::uint64_t bound = 0;
};

std::vector<PmfStats> compute_ne_count_pmf(const ExperimentSpec& spec);

// Channel-occupancy comparison at sampled channel-selection equilibria.
struct FractionRow {
  int channel = 0;        // 1-based
  double b = 0.0;         // bandwidth fraction
  double x_formula = 0.0; // solve_fractions prediction
  double x_mean = 0.0;    // empirical mean over draws
  double x_std = 0.0;     // empirical standard deviation over draws
};

std::vector<FractionRow> compute_fractions(const ExperimentSpec& spec);

// Table renderings of the above (CSV headers documented in the README).
Table run_experiment(const ExperimentSpec& spec);

}  // namespace pmac
