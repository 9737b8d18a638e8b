// Python bindings for the core operations: game model evaluation, iterative
// water-filling, channel-selection enumeration, 2x2 closed forms, asymptotic
// occupancy fractions, and SIC rate splits.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <stdexcept>
#include <vector>

#include "pmac/analytic2x2.hpp"
#include "pmac/asymptotics.hpp"
#include "pmac/enumerate.hpp"
#include "pmac/errors.hpp"
#include "pmac/experiments.hpp"
#include "pmac/io.hpp"
#include "pmac/model.hpp"
#include "pmac/rng.hpp"
#include "pmac/sic.hpp"
#include "pmac/waterfill.hpp"

namespace py = pybind11;

namespace {

pmac::GainMatrix gains_from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty())
    throw std::invalid_argument("gain matrix must be non-empty");
  pmac::GainMatrix g;
  g.num_players = static_cast<int>(rows.size());
  g.num_channels = static_cast<int>(rows.front().size());
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != g.num_channels)
      throw std::invalid_argument("gain matrix rows must have equal length");
    g.values.insert(g.values.end(), row.begin(), row.end());
  }
  g.validate();
  return g;
}

std::vector<std::vector<double>> profile_rows(const pmac::PowerProfile& p) {
  std::vector<std::vector<double>> rows(p.num_players);
  for (int k = 0; k < p.num_players; ++k)
    rows[k].assign(p.values.begin() + (std::size_t)k * p.num_channels,
                   p.values.begin() + (std::size_t)(k + 1) * p.num_channels);
  return rows;
}

pmac::PowerProfile profile_from_rows(
    const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty())
    throw std::invalid_argument("power profile must be non-empty");
  pmac::PowerProfile p;
  p.num_players = static_cast<int>(rows.size());
  p.num_channels = static_cast<int>(rows.front().size());
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != p.num_channels)
      throw std::invalid_argument("power profile rows must have equal length");
    p.values.insert(p.values.end(), row.begin(), row.end());
  }
  return p;
}

}  // namespace

PYBIND11_MODULE(_pmac, m) {
  m.doc() =
      "Equilibria of decentralized power-allocation and channel-selection "
      "games on parallel multiple-access channels";

  py::register_exception<pmac::CapExceeded>(m, "CapExceededError");
  py::register_exception<pmac::NonConvergence>(m, "NonConvergenceError");
  py::register_exception<pmac::ClassificationError>(m, "ClassificationFailure");
  py::register_exception<pmac::TieError>(m, "TieBreakError");

  py::class_<pmac::GameConfig>(m, "GameConfig")
      .def(py::init([](int num_players, int num_channels,
                       std::vector<double> max_power, double noise_density,
                       std::vector<double> bandwidths) {
             pmac::GameConfig cfg;
             cfg.num_players = num_players;
             cfg.num_channels = num_channels;
             cfg.max_power = std::move(max_power);
             cfg.noise_density = noise_density;
             cfg.bandwidths = std::move(bandwidths);
             cfg.validate();
             return cfg;
           }),
           py::arg("num_players"), py::arg("num_channels"),
           py::arg("max_power"), py::arg("noise_density"),
           py::arg("bandwidths"))
      .def_readonly("num_players", &pmac::GameConfig::num_players)
      .def_readonly("num_channels", &pmac::GameConfig::num_channels)
      .def_readonly("max_power", &pmac::GameConfig::max_power)
      .def_readonly("noise_density", &pmac::GameConfig::noise_density)
      .def_readonly("bandwidths", &pmac::GameConfig::bandwidths)
      .def("total_bandwidth", &pmac::GameConfig::total_bandwidth)
      .def("band_fraction", &pmac::GameConfig::band_fraction, py::arg("s"))
      .def("noise_power", &pmac::GameConfig::noise_power, py::arg("s"));

  m.def("uniform_config", &pmac::uniform_config, py::arg("num_players"),
        py::arg("num_channels"), py::arg("snr"),
        "Unit-bandwidth channels, unit budgets, common per-channel SNR");

  py::class_<pmac::GainMatrix>(m, "GainMatrix")
      .def(py::init(&gains_from_rows), py::arg("rows"))
      .def_readonly("num_players", &pmac::GainMatrix::num_players)
      .def_readonly("num_channels", &pmac::GainMatrix::num_channels)
      .def(
          "at",
          [](const pmac::GainMatrix& g, int k, int s) { return g.at(k, s); },
          py::arg("k"), py::arg("s"))
      .def("rows", [](const pmac::GainMatrix& g) {
        std::vector<std::vector<double>> rows(g.num_players);
        for (int k = 0; k < g.num_players; ++k)
          rows[k].assign(
              g.values.begin() + (std::size_t)k * g.num_channels,
              g.values.begin() + (std::size_t)(k + 1) * g.num_channels);
        return rows;
      });

  py::class_<pmac::PowerProfile>(m, "PowerProfile")
      .def(py::init(&profile_from_rows), py::arg("rows"))
      .def_readonly("num_players", &pmac::PowerProfile::num_players)
      .def_readonly("num_channels", &pmac::PowerProfile::num_channels)
      .def(
          "at",
          [](const pmac::PowerProfile& p, int k, int s) { return p.at(k, s); },
          py::arg("k"), py::arg("s"))
      .def("row_sum", &pmac::PowerProfile::row_sum, py::arg("k"))
      .def("rows", &profile_rows);

  py::class_<pmac::CsProfile>(m, "CsProfile")
      .def(py::init([](std::vector<int> choices) {
             return pmac::CsProfile{std::move(choices)};
           }),
           py::arg("choices"))
      .def_readonly("choices", &pmac::CsProfile::choices);

  m.def("sinr", &pmac::sinr, py::arg("profile"), py::arg("gains"),
        py::arg("cfg"), py::arg("k"), py::arg("s"));
  m.def("utility", &pmac::utility, py::arg("profile"), py::arg("gains"),
        py::arg("cfg"), py::arg("k"));
  m.def("nse", &pmac::nse, py::arg("profile"), py::arg("gains"),
        py::arg("cfg"));
  m.def("potential", &pmac::potential, py::arg("profile"), py::arg("gains"),
        py::arg("cfg"));
  m.def("cs_to_power", &pmac::cs_to_power, py::arg("profile"), py::arg("cfg"));
  m.def("power_to_cs", &pmac::power_to_cs, py::arg("profile"),
        py::arg("cfg"));

  py::class_<pmac::RandomStream>(m, "RandomStream")
      .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"),
           py::arg("stream") = 0)
      .def("next_u64", &pmac::RandomStream::next_u64)
      .def("next_uniform", &pmac::RandomStream::next_uniform)
      .def("next_exp1", &pmac::RandomStream::next_exp1)
      .def("next_below", &pmac::RandomStream::next_below, py::arg("bound"));

  m.def(
      "sample_gains",
      [](int num_players, int num_channels, pmac::RandomStream& rng) {
        return pmac::sample_gains(num_players, num_channels, rng);
      },
      py::arg("num_players"), py::arg("num_channels"), py::arg("rng"));

  py::class_<pmac::WaterfillAllocation>(m, "WaterfillAllocation")
      .def_readonly("alloc", &pmac::WaterfillAllocation::alloc)
      .def_readonly("level", &pmac::WaterfillAllocation::level)
      .def_readonly("residual", &pmac::WaterfillAllocation::residual);

  m.def("weighted_waterfill", &pmac::weighted_waterfill, py::arg("weights"),
        py::arg("floors"), py::arg("budget"), py::arg("tolerance") = 1e-12,
        py::arg("max_iters") = 200);

  m.def(
      "waterfill_best_response",
      [](const pmac::PowerProfile& profile, const pmac::GainMatrix& gains,
         const pmac::GameConfig& cfg, int player) {
        return pmac::waterfill_best_response(profile, gains, cfg, player);
      },
      py::arg("profile"), py::arg("gains"), py::arg("cfg"), py::arg("player"));

  py::class_<pmac::PaSolution>(m, "PaSolution")
      .def_readonly("profile", &pmac::PaSolution::profile)
      .def_readonly("rounds", &pmac::PaSolution::rounds)
      .def_readonly("residual", &pmac::PaSolution::residual)
      .def_readonly("converged", &pmac::PaSolution::converged)
      .def_readonly("inactive_players", &pmac::PaSolution::inactive_players);

  m.def(
      "solve_pa_ne",
      [](const pmac::GainMatrix& gains, const pmac::GameConfig& cfg,
         double tolerance, int max_rounds) {
        pmac::WaterfillParams params;
        params.br_sweep_tolerance = tolerance;
        params.max_rounds = max_rounds;
        return pmac::solve_pa_ne(gains, cfg, params);
      },
      py::arg("gains"), py::arg("cfg"), py::arg("tolerance") = 1e-9,
      py::arg("max_rounds") = 10000);

  py::class_<pmac::NeResidualReport>(m, "NeResidualReport")
      .def_readonly("max_residual", &pmac::NeResidualReport::max_residual)
      .def_readonly("worst_player", &pmac::NeResidualReport::worst_player)
      .def_readonly("is_ne", &pmac::NeResidualReport::is_ne);

  m.def(
      "verify_pa_ne",
      [](const pmac::PowerProfile& profile, const pmac::GainMatrix& gains,
         const pmac::GameConfig& cfg, double tolerance) {
        return pmac::verify_pa_ne(profile, gains, cfg, tolerance);
      },
      py::arg("profile"), py::arg("gains"), py::arg("cfg"),
      py::arg("tolerance") = 1e-8);

  m.def("ne_upper_bound", &pmac::ne_upper_bound, py::arg("num_players"),
        py::arg("num_channels"));
  m.def("ne_fraction_estimate", &pmac::ne_fraction_estimate,
        py::arg("num_players"), py::arg("num_channels"));

  py::class_<pmac::NeEntry>(m, "NeEntry")
      .def_readonly("profile", &pmac::NeEntry::profile)
      .def_readonly("potential", &pmac::NeEntry::potential)
      .def_readonly("utilities", &pmac::NeEntry::utilities)
      .def_readonly("nse", &pmac::NeEntry::nse)
      .def_readonly("label", &pmac::NeEntry::label);

  py::class_<pmac::NeReport>(m, "NeReport")
      .def_readonly("equilibria", &pmac::NeReport::equilibria)
      .def_readonly("bound", &pmac::NeReport::bound)
      .def_readonly("ties", &pmac::NeReport::ties)
      .def_readonly("sampled", &pmac::NeReport::sampled)
      .def_readonly("profiles_checked", &pmac::NeReport::profiles_checked);

  m.def("enumerate_cs_ne", &pmac::enumerate_cs_ne, py::arg("gains"),
        py::arg("cfg"), py::arg("tie_tolerance") = 0.0,
        py::arg("cap") = pmac::kDefaultEnumerationCap);

  py::class_<pmac::ChannelQuad>(m, "ChannelQuad")
      .def(py::init([](double g11, double g12, double g21, double g22,
                       double p_max, double sigma2) {
             pmac::ChannelQuad q{g11, g12, g21, g22, p_max, sigma2};
             q.validate();
             return q;
           }),
           py::arg("g11"), py::arg("g12"), py::arg("g21"), py::arg("g22"),
           py::arg("p_max") = 1.0, py::arg("sigma2") = 1.0)
      .def_readonly("g11", &pmac::ChannelQuad::g11)
      .def_readonly("g12", &pmac::ChannelQuad::g12)
      .def_readonly("g21", &pmac::ChannelQuad::g21)
      .def_readonly("g22", &pmac::ChannelQuad::g22)
      .def_readonly("p_max", &pmac::ChannelQuad::p_max)
      .def_readonly("sigma2", &pmac::ChannelQuad::sigma2)
      .def("snr", &pmac::ChannelQuad::snr);

  py::enum_<pmac::PaRegion>(m, "PaRegion")
      .value("B1", pmac::PaRegion::B1)
      .value("B2", pmac::PaRegion::B2)
      .value("B3", pmac::PaRegion::B3)
      .value("B4", pmac::PaRegion::B4)
      .value("B5", pmac::PaRegion::B5)
      .value("B6", pmac::PaRegion::B6)
      .value("B7", pmac::PaRegion::B7)
      .value("B8", pmac::PaRegion::B8)
      .value("DEGENERATE_CONTINUUM", pmac::PaRegion::DegenerateContinuum);

  py::enum_<pmac::CsRegion>(m, "CsRegion")
      .value("A1", pmac::CsRegion::A1)
      .value("A2", pmac::CsRegion::A2)
      .value("A3", pmac::CsRegion::A3)
      .value("A4", pmac::CsRegion::A4);

  py::enum_<pmac::HighSnrPaRegion>(m, "HighSnrPaRegion")
      .value("B1P", pmac::HighSnrPaRegion::B1p)
      .value("B4P", pmac::HighSnrPaRegion::B4p)
      .value("B5P", pmac::HighSnrPaRegion::B5p)
      .value("B6P", pmac::HighSnrPaRegion::B6p)
      .value("B7P", pmac::HighSnrPaRegion::B7p)
      .value("B8P", pmac::HighSnrPaRegion::B8p);

  py::class_<pmac::ContinuumDescriptor>(m, "ContinuumDescriptor")
      .def_readonly("slope", &pmac::ContinuumDescriptor::slope)
      .def_readonly("intercept", &pmac::ContinuumDescriptor::intercept)
      .def_readonly("p22_min", &pmac::ContinuumDescriptor::p22_min)
      .def_readonly("p22_max", &pmac::ContinuumDescriptor::p22_max)
      .def("point", &pmac::ContinuumDescriptor::point, py::arg("p22"),
           py::arg("quad"));

  py::class_<pmac::PaClassification>(m, "PaClassification")
      .def_readonly("region", &pmac::PaClassification::region)
      .def_readonly("p11", &pmac::PaClassification::p11)
      .def_readonly("p22", &pmac::PaClassification::p22)
      .def_readonly("equilibrium", &pmac::PaClassification::equilibrium)
      .def_readonly("continuum", &pmac::PaClassification::continuum)
      .def_readonly("boundary", &pmac::PaClassification::boundary);

  py::class_<pmac::CsClassification>(m, "CsClassification")
      .def_readonly("regions", &pmac::CsClassification::regions)
      .def_readonly("equilibria", &pmac::CsClassification::equilibria)
      .def_readonly("multiple", &pmac::CsClassification::multiple)
      .def_readonly("boundary", &pmac::CsClassification::boundary);

  m.def("classify_pa_2x2", &pmac::classify_pa_2x2, py::arg("quad"),
        py::arg("boundary_tol") = pmac::kBoundaryTol);
  m.def("classify_cs_2x2", &pmac::classify_cs_2x2, py::arg("quad"),
        py::arg("boundary_tol") = pmac::kBoundaryTol);
  m.def("low_snr_limit_ne", &pmac::low_snr_limit_ne, py::arg("quad"));
  m.def("high_snr_cs_ne", &pmac::high_snr_cs_ne, py::arg("quad"));
  m.def("high_snr_pa_region", &pmac::high_snr_pa_region, py::arg("quad"));
  m.def("high_snr_pa_equilibrium", &pmac::high_snr_pa_equilibrium,
        py::arg("quad"));
  m.def("braess_gap", &pmac::braess_gap, py::arg("quad"), py::arg("which"),
        py::arg("snr_override") = std::nullopt);
  m.def("braess_gap_closed_form", &pmac::braess_gap_closed_form,
        py::arg("quad"), py::arg("which"));

  py::class_<pmac::LargeSystemParams>(m, "LargeSystemParams")
      .def(py::init([](double mu, std::vector<double> b,
                       std::vector<double> omega, double p_max,
                       double noise_density) {
             pmac::LargeSystemParams params;
             params.mu = mu;
             params.b = std::move(b);
             params.omega = std::move(omega);
             params.p_max = p_max;
             params.noise_density = noise_density;
             params.validate();
             return params;
           }),
           py::arg("mu"), py::arg("b"), py::arg("omega"),
           py::arg("p_max") = 1.0, py::arg("noise_density") = 1.0)
      .def_readonly("mu", &pmac::LargeSystemParams::mu)
      .def_readonly("b", &pmac::LargeSystemParams::b)
      .def_readonly("omega", &pmac::LargeSystemParams::omega)
      .def_readonly("p_max", &pmac::LargeSystemParams::p_max)
      .def_readonly("noise_density", &pmac::LargeSystemParams::noise_density);

  m.def("asymptotic_potential", &pmac::asymptotic_potential,
        py::arg("fractions"), py::arg("params"));
  m.def("solve_fractions", &pmac::solve_fractions, py::arg("params"),
        py::arg("tolerance") = 1e-12);
  m.def("empirical_fractions", &pmac::empirical_fractions, py::arg("profile"),
        py::arg("num_channels"));
  m.def("fraction_kkt_residual", &pmac::fraction_kkt_residual,
        py::arg("fractions"), py::arg("params"));

  py::class_<pmac::SicReport>(m, "SicReport")
      .def_readonly("per_user_rates", &pmac::SicReport::per_user_rates)
      .def_readonly("sum_rate", &pmac::SicReport::sum_rate)
      .def_readonly("potential_identity_residual",
                    &pmac::SicReport::potential_identity_residual)
      .def_readonly("order", &pmac::SicReport::order)
      .def_readonly("sampled", &pmac::SicReport::sampled);

  m.def("sic_nse", &pmac::sic_nse, py::arg("profile"), py::arg("gains"),
        py::arg("cfg"));
  m.def(
      "sic_user_rates",
      [](const pmac::PowerProfile& profile, const pmac::GainMatrix& gains,
         const pmac::GameConfig& cfg, std::vector<int> order) {
        pmac::DecodingOrder d{std::move(order)};
        d.validate(cfg.num_players);
        return pmac::sic_user_rates(profile, gains, cfg, d);
      },
      py::arg("profile"), py::arg("gains"), py::arg("cfg"), py::arg("order"));
  m.def(
      "sic_capacity_at_ne",
      [](const pmac::GainMatrix& gains, const pmac::GameConfig& cfg,
         const std::string& game, std::optional<std::vector<int>> order,
         std::uint64_t cap, std::uint64_t descent_seed) {
        if (game != "a" && game != "b")
          throw std::invalid_argument("game must be 'a' or 'b'");
        std::optional<pmac::DecodingOrder> d;
        if (order) {
          d = pmac::DecodingOrder{std::move(*order)};
          d->validate(cfg.num_players);
        }
        return pmac::sic_capacity_at_ne(gains, cfg, game[0],
                                        d ? &*d : nullptr, cap, {},
                                        descent_seed);
      },
      py::arg("gains"), py::arg("cfg"), py::arg("game"),
      py::arg("order") = std::nullopt,
      py::arg("cap") = pmac::kDefaultEnumerationCap,
      py::arg("descent_seed") = 0);
}
