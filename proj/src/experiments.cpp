#include "pmac/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include "pmac/enumerate.hpp"
#include "pmac/errors.hpp"
#include "pmac/waterfill.hpp"

namespace pmac {

namespace {

// Stream-id layout: one block per grid cell, trials within the block.
std::uint64_t stream_id(std::uint64_t block, std::uint64_t trial) {
  return (block << 40) + trial;
}

struct Accumulator {
  int n = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double v) {
    ++n;
    sum += v;
    sum_sq += v * v;
  }
  double mean() const { return n ? sum / n : 0.0; }
  double variance() const {
    if (n < 2) return 0.0;
    const double m = mean();
    return std::max(0.0, (sum_sq - n * m * m) / (n - 1));
  }
  double stddev() const { return std::sqrt(variance()); }
  double standard_error() const { return n ? stddev() / std::sqrt(n) : 0.0; }
};

int rounded_positive(double v) { return std::max(1, (int)std::lround(v)); }

}  // namespace

GameConfig uniform_config(int num_players, int num_channels, double snr) {
  if (!(snr > 0.0))
    throw std::invalid_argument("uniform config: SNR must be positive");
  GameConfig cfg;
  cfg.num_players = num_players;
  cfg.num_channels = num_channels;
  cfg.max_power.assign(num_players, 1.0);
  cfg.noise_density = 1.0 / snr;
  cfg.bandwidths.assign(num_channels, 1.0);
  cfg.validate();
  return cfg;
}

GainMatrix sample_gains(int num_players, int num_channels, RandomStream& rng) {
  GainMatrix gains;
  gains.num_players = num_players;
  gains.num_channels = num_channels;
  gains.values.resize(static_cast<std::size_t>(num_players) * num_channels);
  for (double& g : gains.values) g = rng.next_exp1();
  return gains;
}

namespace {

// Channel-selection side of one trial: exhaustive enumeration when S^K fits
// under the cap, otherwise best-response descent from random starts.
void eval_cs_side(const GameConfig& cfg, const GainMatrix& gains,
                  std::uint64_t exhaustive_cap, int descent_starts,
                  RandomStream& rng, TrialResult& result) {
  try {
    const NeReport report = enumerate_cs_ne(gains, cfg, 0.0, exhaustive_cap);
    result.ne_count = report.equilibria.size();
    result.cs_sampled = false;
    const NeEntry* best = nullptr;
    double worst_nse = 1e300;
    for (const NeEntry& entry : report.equilibria) {
      if (best == nullptr || entry.potential > best->potential) best = &entry;
      worst_nse = std::min(worst_nse, entry.nse);
    }
    result.nse_cs_best = best->nse;
    result.nse_cs_worst = worst_nse;
    result.fractions = empirical_fractions(best->profile, cfg.num_channels);
  } catch (const CapExceeded&) {
    result.cs_sampled = true;
    std::set<std::vector<int>> seen;
    double best_potential = -1e300;
    double best_nse = 0.0, worst_nse = 1e300;
    CsProfile best_profile;
    const int starts = std::max(1, descent_starts);
    for (int i = 0; i < starts; ++i) {
      const DescentResult descent = br_descent_sink(
          gains, cfg,
          random_cs_profile(cfg.num_players, cfg.num_channels, rng));
      const PowerProfile p = cs_to_power(descent.profile, cfg);
      const double phi = potential(p, gains, cfg);
      const double value = nse(p, gains, cfg);
      seen.insert(descent.profile.choices);
      if (phi > best_potential) {
        best_potential = phi;
        best_nse = value;
        best_profile = descent.profile;
      }
      worst_nse = std::min(worst_nse, value);
    }
    result.ne_count = seen.size();
    result.nse_cs_best = best_nse;
    result.nse_cs_worst = worst_nse;
    result.fractions = empirical_fractions(best_profile, cfg.num_channels);
  }
}

}  // namespace

TrialResult run_trial(const GameConfig& cfg, const GainMatrix& gains,
                      std::uint64_t exhaustive_cap, int descent_starts,
                      std::uint64_t seed, std::uint64_t trial_index) {
  RandomStream rng(seed, stream_id(trial_index, 0x7431a1));
  TrialResult result;
  result.draw_index = trial_index;

  const PaSolution pa = solve_pa_ne(gains, cfg);
  result.pa_converged = pa.converged;
  result.nse_pa = nse(pa.profile, gains, cfg);

  eval_cs_side(cfg, gains, exhaustive_cap, descent_starts, rng, result);
  return result;
}

namespace {

std::vector<SweepPoint> sweep_grid(const ExperimentSpec& spec,
                                   bool snr_is_outer) {
  if (spec.eta_list.empty() || spec.snr_grid_db.empty())
    throw std::invalid_argument("sweep: eta list and SNR grid must be non-empty");
  if (spec.trials < 1) throw std::invalid_argument("sweep: trials >= 1");

  std::vector<SweepPoint> points;
  std::uint64_t block = 0;
  const std::size_t outer_n =
      snr_is_outer ? spec.snr_grid_db.size() : spec.eta_list.size();
  const std::size_t inner_n =
      snr_is_outer ? spec.eta_list.size() : spec.snr_grid_db.size();

  for (std::size_t outer = 0; outer < outer_n; ++outer) {
    for (std::size_t inner = 0; inner < inner_n; ++inner, ++block) {
      const double eta =
          snr_is_outer ? spec.eta_list[inner] : spec.eta_list[outer];
      const double snr_db =
          snr_is_outer ? spec.snr_grid_db[outer] : spec.snr_grid_db[inner];
      if (!(eta > 0.0)) throw std::invalid_argument("sweep: loads must be positive");

      SweepPoint point;
      point.eta = eta;
      point.snr_db = snr_db;
      if (snr_is_outer) {
        // load sweep: channel count fixed, player count set by the load
        point.num_channels = spec.num_channels;
        point.num_players = rounded_positive(eta * spec.num_channels);
      } else {
        // SNR sweep: player count fixed, channel count set by the load
        point.num_players = spec.num_players;
        point.num_channels = rounded_positive(spec.num_players / eta);
      }
      point.trials = spec.trials;

      const double snr = std::pow(10.0, snr_db / 10.0);
      const GameConfig cfg =
          uniform_config(point.num_players, point.num_channels, snr);

      Accumulator pa_acc, cs_acc;
      for (int trial = 0; trial < spec.trials; ++trial) {
        RandomStream rng(spec.seed, stream_id(block, trial));
        const GainMatrix gains =
            sample_gains(point.num_players, point.num_channels, rng);
        const TrialResult result =
            run_trial(cfg, gains, spec.exhaustive_cap, spec.descent_starts,
                      spec.seed, stream_id(block, trial));
        pa_acc.add(result.nse_pa);
        cs_acc.add(result.nse_cs_best);
        point.sampled |= result.cs_sampled;
      }
      point.pa_mean = pa_acc.mean();
      point.pa_se = pa_acc.standard_error();
      point.cs_mean = cs_acc.mean();
      point.cs_se = cs_acc.standard_error();
      points.push_back(point);
    }
  }
  return points;
}

}  // namespace

std::vector<SweepPoint> compute_nse_vs_snr(const ExperimentSpec& spec) {
  return sweep_grid(spec, /*snr_is_outer=*/false);
}

std::vector<SweepPoint> compute_nse_vs_load(const ExperimentSpec& spec) {
  return sweep_grid(spec, /*snr_is_outer=*/true);
}

std::vector<PmfStats> compute_ne_count_pmf(const ExperimentSpec& spec) {
  if (spec.ks_list.empty() || spec.snr_grid_db.empty())
    throw std::invalid_argument("pmf: (K,S) list and SNR grid must be non-empty");
  std::vector<PmfStats> cells;
  std::uint64_t block = 0;
  for (const auto& [K, S] : spec.ks_list) {
    for (double snr_db : spec.snr_grid_db) {
      const double snr = std::pow(10.0, snr_db / 10.0);
      const GameConfig cfg = uniform_config(K, S, snr);
      std::map<std::uint64_t, int> histogram;
      std::uint64_t observed_max = 0;
      for (int trial = 0; trial < spec.trials; ++trial) {
        RandomStream rng(spec.seed, stream_id(block, trial));
        const GainMatrix gains = sample_gains(K, S, rng);
        const NeReport report =
            enumerate_cs_ne(gains, cfg, 0.0, spec.exhaustive_cap);
        const std::uint64_t count = report.equilibria.size();
        ++histogram[count];
        observed_max = std::max(observed_max, count);
      }
      PmfStats stats;
      stats.observed_max = observed_max;
      stats.bound = ne_upper_bound(K, S);
      for (const auto& [count, occurrences] : histogram) {
        PmfRow row;
        row.num_players = K;
        row.num_channels = S;
        row.snr_db = snr_db;
        row.ne_count = count;
        row.probability = static_cast<double>(occurrences) / spec.trials;
        row.trials = spec.trials;
        stats.rows.push_back(row);
      }
      cells.push_back(std::move(stats));
      ++block;
    }
  }
  return cells;
}

std::vector<FractionRow> compute_fractions(const ExperimentSpec& spec) {
  const std::vector<double>& b = spec.bandwidth_fractions;
  if (b.empty()) throw std::invalid_argument("fractions: need bandwidth fractions");
  if (spec.trials < 1) throw std::invalid_argument("fractions: trials >= 1");
  const int K = spec.num_players;
  const int S = static_cast<int>(b.size());
  const double snr = std::pow(10.0, spec.snr_db / 10.0);

  // Unit total bandwidth: B_s = b_s, p_max = 1, N0 = 1/snr (so that
  // p_max / (N0 * B) = snr).
  GameConfig cfg;
  cfg.num_players = K;
  cfg.num_channels = S;
  cfg.max_power.assign(K, 1.0);
  cfg.noise_density = 1.0 / snr;
  cfg.bandwidths = b;
  cfg.validate();

  LargeSystemParams params;
  params.mu = 1.0 / K;  // limit bandwidth per user, B/K
  params.b = b;
  params.omega.assign(S, 1.0);  // unit-mean fading power gains
  params.p_max = 1.0;
  params.noise_density = cfg.noise_density;
  const std::vector<double> x_formula = solve_fractions(params);

  std::vector<Accumulator> acc(S);
  for (int trial = 0; trial < spec.trials; ++trial) {
    RandomStream rng(spec.seed, stream_id(0, trial));
    const GainMatrix gains = sample_gains(K, S, rng);
    TrialResult result;
    // Exhaustive enumeration is unreachable at these sizes; descend directly.
    eval_cs_side(cfg, gains, /*exhaustive_cap=*/0, spec.descent_starts, rng,
                 result);
    for (int s = 0; s < S; ++s) acc[s].add(result.fractions[s]);
  }

  std::vector<FractionRow> rows(S);
  for (int s = 0; s < S; ++s) {
    rows[s].channel = s + 1;
    rows[s].b = b[s];
    rows[s].x_formula = x_formula[s];
    rows[s].x_mean = acc[s].mean();
    rows[s].x_std = acc[s].stddev();
  }
  return rows;
}

ExperimentSpec parse_experiment_spec(const nlohmann::json& j) {
  ExperimentSpec spec;
  spec.kind = j.at("kind").get<std::string>();
  if (spec.kind != "nse_vs_snr" && spec.kind != "nse_vs_load" &&
      spec.kind != "ne_count_pmf" && spec.kind != "fractions")
    throw std::invalid_argument("experiment: unknown kind " + spec.kind);

  if (j.contains("K")) spec.num_players = j.at("K").get<int>();
  if (j.contains("S")) spec.num_channels = j.at("S").get<int>();
  if (j.contains("eta")) spec.eta_list = j.at("eta").get<std::vector<double>>();
  if (j.contains("snr_grid_db"))
    spec.snr_grid_db = j.at("snr_grid_db").get<std::vector<double>>();
  if (j.contains("trials")) spec.trials = j.at("trials").get<int>();
  if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("out")) spec.output_path = j.at("out").get<std::string>();
  if (j.contains("b"))
    spec.bandwidth_fractions = j.at("b").get<std::vector<double>>();
  if (j.contains("snr_db")) spec.snr_db = j.at("snr_db").get<double>();
  if (j.contains("exhaustive_cap"))
    spec.exhaustive_cap = j.at("exhaustive_cap").get<std::uint64_t>();
  if (j.contains("descent_starts"))
    spec.descent_starts = j.at("descent_starts").get<int>();
  if (j.contains("ks")) {
    for (const auto& pair : j.at("ks")) {
      if (!pair.is_array() || pair.size() != 2)
        throw std::invalid_argument("experiment: ks must be [[K,S],...]");
      spec.ks_list.emplace_back(pair[0].get<int>(), pair[1].get<int>());
    }
  }

  // Per-kind defaults for anything not supplied.
  if (spec.kind == "nse_vs_snr") {
    if (spec.eta_list.empty()) spec.eta_list = {0.5, 1.0, 1.5};
    if (spec.snr_grid_db.empty())
      spec.snr_grid_db = {-20, -10, 0, 10, 20, 30};
  } else if (spec.kind == "nse_vs_load") {
    if (spec.eta_list.empty())
      spec.eta_list = {0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0};
    if (spec.snr_grid_db.empty()) spec.snr_grid_db = {0, 10, 20};
  } else if (spec.kind == "ne_count_pmf") {
    if (spec.ks_list.empty()) spec.ks_list = {{3, 2}, {3, 3}};
    if (spec.snr_grid_db.empty()) spec.snr_grid_db = {-30, 10, 40};
  } else if (spec.kind == "fractions") {
    if (spec.bandwidth_fractions.empty())
      spec.bandwidth_fractions = {0.25, 0.11, 0.20, 0.05, 0.25, 0.14};
    if (!j.contains("K")) spec.num_players = 60;
  }
  return spec;
}

ExperimentSpec load_experiment_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open experiment spec: " + path);
  nlohmann::json j;
  in >> j;
  return parse_experiment_spec(j);
}

namespace {

Table sweep_table(const std::vector<SweepPoint>& points, bool snr_first) {
  Table t;
  if (snr_first)
    t.header = {"snr_db", "eta", "K", "S", "trials", "nse_pa_mean",
                "nse_pa_se", "nse_cs_mean", "nse_cs_se", "cs_mode"};
  else
    t.header = {"eta", "K", "S", "snr_db", "trials", "nse_pa_mean",
                "nse_pa_se", "nse_cs_mean", "nse_cs_se", "cs_mode"};
  for (const SweepPoint& p : points) {
    std::vector<std::string> row;
    if (snr_first) {
      row.push_back(format_double(p.snr_db));
      row.push_back(format_double(p.eta));
      row.push_back(std::to_string(p.num_players));
      row.push_back(std::to_string(p.num_channels));
    } else {
      row.push_back(format_double(p.eta));
      row.push_back(std::to_string(p.num_players));
      row.push_back(std::to_string(p.num_channels));
      row.push_back(format_double(p.snr_db));
    }
    row.push_back(std::to_string(p.trials));
    row.push_back(format_double(p.pa_mean));
    row.push_back(format_double(p.pa_se));
    row.push_back(format_double(p.cs_mean));
    row.push_back(format_double(p.cs_se));
    row.push_back(p.sampled ? "sampled" : "exhaustive");
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace

Table run_experiment(const ExperimentSpec& spec) {
  if (spec.kind == "nse_vs_snr")
    return sweep_table(compute_nse_vs_snr(spec), /*snr_first=*/false);
  if (spec.kind == "nse_vs_load")
    return sweep_table(compute_nse_vs_load(spec), /*snr_first=*/true);
  if (spec.kind == "ne_count_pmf") {
    Table t;
    t.header = {"K", "S", "snr_db", "ne_count", "probability", "trials"};
    for (const PmfStats& cell : compute_ne_count_pmf(spec)) {
      for (const PmfRow& row : cell.rows) {
        t.rows.push_back({std::to_string(row.num_players),
                          std::to_string(row.num_channels),
                          format_double(row.snr_db),
                          std::to_string(row.ne_count),
                          format_double(row.probability),
                          std::to_string(row.trials)});
      }
    }
    return t;
  }
  if (spec.kind == "fractions") {
    Table t;
    t.header = {"channel", "b_s", "x_formula", "x_empirical_mean",
                "x_empirical_std"};
    for (const FractionRow& row : compute_fractions(spec)) {
      t.rows.push_back({std::to_string(row.channel), format_double(row.b),
                        format_double(row.x_formula), format_double(row.x_mean),
                        format_double(row.x_std)});
    }
    return t;
  }
  throw std::invalid_argument("experiment: unknown kind " + spec.kind);
}

}  // namespace pmac
