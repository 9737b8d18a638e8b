// Command-line front end: continuous power-allocation equilibria, discrete
// channel-selection enumeration, 2x2 closed-form classification, asymptotic
// occupancy fractions, SIC rate splits, and the Monte-Carlo experiment
// harness. Exit codes: 0 success, 2 solver non-convergence, 3 state-space
// cap exceeded, 1 any other error.
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "pmac/analytic2x2.hpp"
#include "pmac/enumerate.hpp"
#include "pmac/errors.hpp"
#include "pmac/experiments.hpp"
#include "pmac/io.hpp"
#include "pmac/model.hpp"
#include "pmac/sic.hpp"
#include "pmac/waterfill.hpp"

namespace {

// Writes to `path`, or stdout when the path is empty.
class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_)
        throw std::runtime_error("cannot open output file: " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void check_format(const std::string& format) {
  if (format != "csv" && format != "json")
    throw std::runtime_error("unknown --format (expected csv or json): " +
                             format);
}

void emit_table(const pmac::Table& table, const std::string& out_path,
                const std::string& format) {
  check_format(format);
  OutputTarget target(out_path);
  if (format == "csv")
    pmac::write_table_csv(table, target.stream());
  else
    pmac::write_table_json(table, target.stream());
}

// Interprets an equal-parameter 2x2 instance as a ChannelQuad.
pmac::ChannelQuad quad_from_instance(const pmac::Instance& inst) {
  const pmac::GameConfig& cfg = inst.config;
  if (cfg.num_players != 2 || cfg.num_channels != 2)
    throw std::invalid_argument("classify-2x2 needs a 2-player 2-channel instance");
  if (cfg.max_power[0] != cfg.max_power[1])
    throw std::invalid_argument("classify-2x2 needs equal power budgets");
  if (cfg.bandwidths[0] != cfg.bandwidths[1])
    throw std::invalid_argument("classify-2x2 needs equal channel bandwidths");
  pmac::ChannelQuad q;
  q.g11 = inst.gains.at(0, 0);
  q.g12 = inst.gains.at(0, 1);
  q.g21 = inst.gains.at(1, 0);
  q.g22 = inst.gains.at(1, 1);
  q.p_max = cfg.max_power[0];
  q.sigma2 = cfg.noise_power(0);
  q.validate();
  return q;
}

std::string join_choices(const pmac::CsProfile& profile) {
  std::string s;
  for (std::size_t i = 0; i < profile.choices.size(); ++i) {
    if (i) s += '-';
    s += std::to_string(profile.choices[i]);
  }
  return s;
}

int cmd_solve_pa(const std::string& instance_path, const std::string& out_path,
                 const std::string& format, double tolerance, int max_rounds) {
  check_format(format);
  const pmac::Instance inst = pmac::load_instance(instance_path);
  pmac::WaterfillParams params;
  params.br_sweep_tolerance = tolerance;
  params.max_rounds = max_rounds;
  const pmac::PaSolution solution =
      pmac::solve_pa_ne(inst.gains, inst.config, params);
  OutputTarget target(out_path);
  if (format == "json") {
    nlohmann::json j = pmac::pa_solution_to_json(solution);
    j["nse"] = pmac::nse(solution.profile, inst.gains, inst.config);
    target.stream() << j.dump(2) << '\n';
  } else {
    pmac::write_power_profile_csv(solution.profile, target.stream());
  }
  if (!solution.converged) {
    std::cerr << "solve-pa: best-response sweeps did not converge (residual "
              << pmac::format_double(solution.residual) << ")\n";
    return 2;
  }
  return 0;
}

int cmd_enumerate_cs(const std::string& instance_path,
                     const std::string& out_path, const std::string& format,
                     std::uint64_t cap, bool cap_given, double tie_tolerance,
                     const std::string& graph_path) {
  check_format(format);
  const pmac::Instance inst = pmac::load_instance(instance_path);
  const pmac::NeReport report =
      pmac::enumerate_cs_ne(inst.gains, inst.config, tie_tolerance, cap);
  OutputTarget target(out_path);
  if (format == "json")
    target.stream() << pmac::ne_report_to_json(report).dump(2) << '\n';
  else
    pmac::write_ne_report_csv(report, target.stream());
  if (!graph_path.empty()) {
    const std::uint64_t graph_cap =
        cap_given ? cap : pmac::kDefaultGraphCap;
    const pmac::CsGraph graph =
        pmac::build_cs_graph(inst.gains, inst.config, graph_cap);
    std::ofstream graph_out(graph_path);
    if (!graph_out)
      throw std::runtime_error("cannot open output file: " + graph_path);
    pmac::write_graph(graph, graph_out);
  }
  return 0;
}

int cmd_classify(const std::optional<std::string>& instance_path,
                 std::vector<double> gains, double p_max, double sigma2,
                 std::optional<double> snr_db, const std::string& out_path,
                 const std::string& format, bool region_map, int grid_points,
                 double ratio_min, double ratio_max) {
  pmac::ChannelQuad q;
  if (instance_path) {
    q = quad_from_instance(pmac::load_instance(*instance_path));
  } else {
    if (gains.size() == 4) {
      q.g11 = gains[0];
      q.g12 = gains[1];
      q.g21 = gains[2];
      q.g22 = gains[3];
    } else if (!region_map) {
      // The region map only needs an SNR; a single classification needs the
      // actual gain quad.
      throw std::invalid_argument(
          "classify-2x2 needs --gains g11,g12,g21,g22 or an instance file");
    }
    q.p_max = p_max;
    q.sigma2 = sigma2;
  }
  if (snr_db) q.sigma2 = q.p_max / std::pow(10.0, *snr_db / 10.0);
  if (region_map) {
    OutputTarget target(out_path);
    pmac::write_region_map_csv(target.stream(), q.snr(), grid_points,
                               ratio_min, ratio_max);
    return 0;
  }
  q.validate();

  const pmac::PaClassification pa = pmac::classify_pa_2x2(q);
  const pmac::CsClassification cs = pmac::classify_cs_2x2(q);

  check_format(format);
  OutputTarget target(out_path);
  if (format == "json") {
    nlohmann::json j;
    j["snr"] = q.snr();
    j["pa"] = {{"region", pmac::to_string(pa.region)},
               {"p11", pa.p11},
               {"p22", pa.p22},
               {"boundary", pa.boundary},
               {"equilibrium", pmac::power_profile_to_json(pa.equilibrium)}};
    if (pa.continuum) {
      j["pa"]["continuum"] = {{"slope", pa.continuum->slope},
                              {"intercept", pa.continuum->intercept},
                              {"p22_min", pa.continuum->p22_min},
                              {"p22_max", pa.continuum->p22_max}};
    }
    nlohmann::json regions = nlohmann::json::array();
    for (const pmac::CsRegion r : cs.regions) regions.push_back(pmac::to_string(r));
    nlohmann::json equilibria = nlohmann::json::array();
    for (const pmac::CsProfile& e : cs.equilibria) equilibria.push_back(e.choices);
    j["cs"] = {{"regions", regions},
               {"equilibria", equilibria},
               {"multiple", cs.multiple},
               {"boundary", cs.boundary}};
    j["gap_1"] = pmac::braess_gap(q, 1);
    j["gap_4"] = pmac::braess_gap(q, 4);
    if (pa.region == pmac::PaRegion::B5)
      j["gap_1_closed_form"] = pmac::braess_gap_closed_form(q, 1);
    if (pa.region == pmac::PaRegion::B8)
      j["gap_4_closed_form"] = pmac::braess_gap_closed_form(q, 4);
    target.stream() << j.dump(2) << '\n';
  } else {
    pmac::Table t;
    t.header = {"g11", "g12", "g21", "g22", "snr",  "pa_region",
                "p11", "p22", "cs_regions", "multiple", "gap_1", "gap_4"};
    std::string cs_regions;
    for (std::size_t i = 0; i < cs.regions.size(); ++i) {
      if (i) cs_regions += '|';
      cs_regions += pmac::to_string(cs.regions[i]);
    }
    t.rows.push_back({pmac::format_double(q.g11), pmac::format_double(q.g12),
                      pmac::format_double(q.g21), pmac::format_double(q.g22),
                      pmac::format_double(q.snr()), pmac::to_string(pa.region),
                      pmac::format_double(pa.p11), pmac::format_double(pa.p22),
                      cs_regions, cs.multiple ? "true" : "false",
                      pmac::format_double(pmac::braess_gap(q, 1)),
                      pmac::format_double(pmac::braess_gap(q, 4))});
    pmac::write_table_csv(t, target.stream());
  }
  return 0;
}

int cmd_sic(const std::string& instance_path, const std::string& out_path,
            const std::string& format, char game, std::vector<int> order_values,
            std::uint64_t cap, std::uint64_t seed) {
  check_format(format);
  const pmac::Instance inst = pmac::load_instance(instance_path);
  std::optional<pmac::DecodingOrder> order;
  if (!order_values.empty()) {
    order = pmac::DecodingOrder{std::move(order_values)};
    order->validate(inst.config.num_players);
  }
  const pmac::SicReport report =
      pmac::sic_capacity_at_ne(inst.gains, inst.config, game,
                               order ? &*order : nullptr, cap, {}, seed);
  OutputTarget target(out_path);
  if (format == "json") {
    target.stream() << pmac::sic_report_to_json(report).dump(2) << '\n';
  } else {
    pmac::Table t;
    t.header = {"player", "rate"};
    for (std::size_t k = 0; k < report.per_user_rates.size(); ++k)
      t.rows.push_back({std::to_string(k + 1),
                        pmac::format_double(report.per_user_rates[k])});
    pmac::write_table_csv(t, target.stream());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Equilibrium toolkit for decentralized parallel multiple-access "
      "channels: power-allocation and channel-selection games"};
  app.require_subcommand(1);
  int exit_code = 0;

  // solve-pa
  std::string pa_instance, pa_out, pa_format = "json";
  double pa_tol = 1e-9;
  int pa_max_rounds = 10000;
  CLI::App* solve_pa =
      app.add_subcommand("solve-pa",
                         "Iterative water-filling equilibrium of the "
                         "power-allocation game for one instance");
  solve_pa->add_option("instance", pa_instance, "instance JSON file")
      ->required();
  solve_pa->add_option("--out", pa_out, "output path (default stdout)");
  solve_pa->add_option("--format", pa_format, "csv|json");
  solve_pa->add_option("--tol", pa_tol, "sweep convergence tolerance");
  solve_pa->add_option("--max-rounds", pa_max_rounds, "sweep round limit");
  solve_pa->callback([&] {
    exit_code = cmd_solve_pa(pa_instance, pa_out, pa_format, pa_tol,
                             pa_max_rounds);
  });

  // enumerate-cs
  std::string cs_instance, cs_out, cs_format = "json", cs_graph;
  std::uint64_t cs_cap = pmac::kDefaultEnumerationCap;
  double cs_tie_tol = 0.0;
  CLI::App* enumerate_cs = app.add_subcommand(
      "enumerate-cs",
      "Exhaustive Nash-equilibrium enumeration of the channel-selection game");
  enumerate_cs->add_option("instance", cs_instance, "instance JSON file")
      ->required();
  enumerate_cs->add_option("--out", cs_out, "output path (default stdout)");
  enumerate_cs->add_option("--format", cs_format, "csv|json");
  CLI::Option* cs_cap_opt = enumerate_cs->add_option(
      "--cap", cs_cap, "maximum S^K profiles to enumerate");
  enumerate_cs->add_option("--tie-tol", cs_tie_tol,
                           "slack for counting deviation ties");
  enumerate_cs->add_option("--graph", cs_graph,
                           "also write the best-response improvement graph "
                           "to this path");
  enumerate_cs->callback([&] {
    exit_code = cmd_enumerate_cs(cs_instance, cs_out, cs_format, cs_cap,
                                 cs_cap_opt->count() > 0, cs_tie_tol, cs_graph);
  });

  // classify-2x2
  std::string cl_instance, cl_out, cl_format = "json";
  std::vector<double> cl_gains;
  double cl_p_max = 1.0, cl_sigma2 = 1.0;
  double cl_snr_db = 0.0;
  bool cl_region_map = false;
  int cl_grid = 241;
  double cl_ratio_min = 0.01, cl_ratio_max = 100.0;
  CLI::App* classify = app.add_subcommand(
      "classify-2x2",
      "Closed-form equilibrium regions of an equal-parameter 2x2 instance");
  CLI::Option* cl_instance_opt =
      classify->add_option("instance", cl_instance, "instance JSON file");
  classify->add_option("--gains", cl_gains, "g11,g12,g21,g22")
      ->delimiter(',')
      ->expected(4);
  classify->add_option("--p-max", cl_p_max, "common power budget");
  classify->add_option("--sigma2", cl_sigma2, "common noise power");
  CLI::Option* cl_snr_opt = classify->add_option(
      "--snr-db", cl_snr_db, "set noise power from an SNR in dB");
  classify->add_option("--out", cl_out, "output path (default stdout)");
  classify->add_option("--format", cl_format, "csv|json");
  classify->add_flag("--region-map", cl_region_map,
                     "emit a CSV region map over the gain-ratio plane "
                     "instead of classifying one quad");
  classify->add_option("--grid", cl_grid, "region map: points per axis");
  classify->add_option("--ratio-min", cl_ratio_min,
                       "region map: smallest gain ratio");
  classify->add_option("--ratio-max", cl_ratio_max,
                       "region map: largest gain ratio");
  classify->callback([&] {
    std::optional<std::string> instance;
    if (cl_instance_opt->count() > 0) instance = cl_instance;
    std::optional<double> snr_db;
    if (cl_snr_opt->count() > 0) snr_db = cl_snr_db;
    exit_code = cmd_classify(instance, cl_gains, cl_p_max, cl_sigma2, snr_db,
                             cl_out, cl_format, cl_region_map, cl_grid,
                             cl_ratio_min, cl_ratio_max);
  });

  // fractions
  std::string fr_out, fr_format = "csv";
  pmac::ExperimentSpec fr_spec;
  fr_spec.kind = "fractions";
  fr_spec.num_players = 60;
  fr_spec.bandwidth_fractions = {0.25, 0.11, 0.20, 0.05, 0.25, 0.14};
  CLI::App* fractions = app.add_subcommand(
      "fractions",
      "Equilibrium channel-occupancy fractions vs the water-filling "
      "prediction for a large uniform-gain population");
  fractions->add_option("--players,-K", fr_spec.num_players, "population size");
  fractions->add_option("--b", fr_spec.bandwidth_fractions,
                        "bandwidth fractions (must sum to 1)")
      ->delimiter(',');
  fractions->add_option("--snr-db", fr_spec.snr_db, "per-channel SNR in dB");
  fractions->add_option("--trials", fr_spec.trials, "number of gain draws");
  fractions->add_option("--seed", fr_spec.seed, "RNG seed");
  fractions->add_option("--starts", fr_spec.descent_starts,
                        "descent restarts per draw");
  fractions->add_option("--out", fr_out, "output path (default stdout)");
  fractions->add_option("--format", fr_format, "csv|json");
  fractions->callback([&] {
    emit_table(pmac::run_experiment(fr_spec), fr_out, fr_format);
  });

  // sic
  std::string sic_instance, sic_out, sic_format = "json";
  std::string sic_game = "a";
  std::vector<int> sic_order;
  std::uint64_t sic_cap = pmac::kDefaultEnumerationCap;
  std::uint64_t sic_seed = 0;
  CLI::App* sic = app.add_subcommand(
      "sic",
      "Per-user rates with successive interference cancellation at a "
      "Nash equilibrium");
  sic->add_option("instance", sic_instance, "instance JSON file")->required();
  sic->add_option("--game", sic_game,
                  "a = power allocation, b = channel selection");
  sic->add_option("--order", sic_order,
                  "decoding order (1-based players, first decoded first)")
      ->delimiter(',');
  sic->add_option("--cap", sic_cap, "enumeration cap for --game b");
  sic->add_option("--seed", sic_seed, "descent seed used past the cap");
  sic->add_option("--out", sic_out, "output path (default stdout)");
  sic->add_option("--format", sic_format, "csv|json");
  sic->callback([&] {
    if (sic_game != "a" && sic_game != "b")
      throw std::runtime_error("--game must be a or b");
    exit_code = cmd_sic(sic_instance, sic_out, sic_format, sic_game[0],
                        sic_order, sic_cap, sic_seed);
  });

  // experiment
  std::string ex_spec_path, ex_out, ex_format = "csv";
  std::uint64_t ex_seed = 0, ex_cap = 0;
  int ex_trials = 0;
  CLI::App* experiment = app.add_subcommand(
      "experiment", "Run a Monte-Carlo experiment described by a JSON spec");
  experiment->add_option("spec", ex_spec_path, "experiment spec JSON file")
      ->required();
  CLI::Option* ex_seed_opt =
      experiment->add_option("--seed", ex_seed, "override the spec's seed");
  CLI::Option* ex_trials_opt = experiment->add_option(
      "--trials", ex_trials, "override the spec's trial count");
  CLI::Option* ex_cap_opt = experiment->add_option(
      "--cap", ex_cap, "override the exhaustive-enumeration cap");
  CLI::Option* ex_out_opt = experiment->add_option(
      "--out", ex_out, "output path (default: spec's `out`, else stdout)");
  experiment->add_option("--format", ex_format, "csv|json");
  experiment->callback([&] {
    pmac::ExperimentSpec spec = pmac::load_experiment_spec(ex_spec_path);
    if (ex_seed_opt->count() > 0) spec.seed = ex_seed;
    if (ex_trials_opt->count() > 0) spec.trials = ex_trials;
    if (ex_cap_opt->count() > 0) spec.exhaustive_cap = ex_cap;
    const std::string out =
        ex_out_opt->count() > 0 ? ex_out : spec.output_path;
    emit_table(pmac::run_experiment(spec), out, ex_format);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const pmac::CapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const pmac::NonConvergence& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return exit_code;
}
