#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <sstream>
#include <vector>

#include "pmac/enumerate.hpp"
#include "pmac/errors.hpp"
#include "pmac/model.hpp"
#include "pmac/rng.hpp"

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

pmac::GainMatrix random_gains(int K, int S, pmac::RandomStream& rng) {
  pmac::GainMatrix g;
  g.num_players = K;
  g.num_channels = S;
  for (int i = 0; i < K * S; ++i) g.values.push_back(rng.next_exp1());
  return g;
}

std::set<std::uint64_t> ne_indices(const pmac::NeReport& report, int S) {
  std::set<std::uint64_t> out;
  for (const auto& e : report.equilibria)
    out.insert(pmac::encode_profile(e.profile, S));
  return out;
}

}  // namespace

TEST_CASE("profile codec is a little-endian mixed-radix bijection") {
  const int K = 3, S = 3;
  CHECK(pmac::encode_profile(pmac::CsProfile{{1, 1, 1}}, S) == 0);
  CHECK(pmac::encode_profile(pmac::CsProfile{{2, 1, 1}}, S) == 1);
  CHECK(pmac::encode_profile(pmac::CsProfile{{1, 2, 1}}, S) == 3);
  CHECK(pmac::encode_profile(pmac::CsProfile{{1, 1, 2}}, S) == 9);
  for (std::uint64_t idx = 0; idx < 27; ++idx) {
    const pmac::CsProfile p = pmac::decode_profile(idx, K, S);
    CHECK(pmac::encode_profile(p, S) == idx);
    for (int c : p.choices) {
      CHECK(c >= 1);
      CHECK(c <= S);
    }
  }
}

TEST_CASE("profile distance counts differing coordinates") {
  CHECK(pmac::profile_distance(pmac::CsProfile{{1, 2, 1}},
                               pmac::CsProfile{{1, 2, 1}}) == 0);
  CHECK(pmac::profile_distance(pmac::CsProfile{{1, 2, 1}},
                               pmac::CsProfile{{2, 2, 3}}) == 2);
}

TEST_CASE("profile count respects the cap") {
  CHECK(pmac::checked_profile_count(3, 3, 100) == 27);
  CHECK(pmac::checked_profile_count(1, 5, 5) == 5);
  CHECK_THROWS_AS(pmac::checked_profile_count(3, 3, 26), pmac::CapExceeded);
  try {
    pmac::checked_profile_count(40, 10, 1000);  // 10^40 saturates
  } catch (const pmac::CapExceeded& e) {
    CHECK(e.cap() == 1000);
    CHECK(e.required() == UINT64_MAX);  // saturated diagnostic
  }
}

TEST_CASE("equilibrium count bound closed form") {
  CHECK(pmac::ne_upper_bound(1, 5) == 1);
  CHECK(pmac::ne_upper_bound(2, 2) == 2);
  CHECK(pmac::ne_upper_bound(3, 2) == 4);
  CHECK(pmac::ne_upper_bound(3, 3) == 7);
  CHECK(pmac::ne_upper_bound(4, 2) == 8);    // 1 + 1*(2^3 - 1)
  CHECK(pmac::ne_upper_bound(5, 4) == 46);   // 1 + 3*(2^4 - 1)
  CHECK(pmac::ne_upper_bound(80, 3) == UINT64_MAX);  // saturates
}

TEST_CASE("equilibrium fraction estimate") {
  CHECK(pmac::ne_fraction_estimate(10, 3) ==
        doctest::Approx(2048.0 / 59049.0).epsilon(1e-15));
  CHECK(pmac::ne_fraction_estimate(2, 2) == doctest::Approx(1.0));
}

TEST_CASE("single-player selection picks the best channel") {
  pmac::GameConfig cfg = make_config(1, 3);
  pmac::GainMatrix g = make_gains(1, 3, {5.0, 1.0, 2.0});
  const pmac::NeReport report = pmac::enumerate_cs_ne(g, cfg);
  REQUIRE(report.equilibria.size() == 1);
  CHECK(report.equilibria[0].profile == pmac::CsProfile{{1}});
  CHECK(report.profiles_checked == 3);
  CHECK(report.bound == 1);
  CHECK_FALSE(report.sampled);
}

TEST_CASE("symmetric 2x2 instance has both orthogonal equilibria") {
  pmac::GameConfig cfg = make_config(2, 2);
  pmac::GainMatrix g = make_gains(2, 2, {1.0, 1.0, 1.0, 1.0});
  const pmac::NeReport report = pmac::enumerate_cs_ne(g, cfg);
  REQUIRE(report.equilibria.size() == 2);
  CHECK(report.equilibria[0].profile == pmac::CsProfile{{2, 1}});
  CHECK(report.equilibria[1].profile == pmac::CsProfile{{1, 2}});
  // Equal-gain instance: both equilibria carry the same potential and NSE.
  CHECK(report.equilibria[0].potential ==
        doctest::Approx(report.equilibria[1].potential).epsilon(1e-15));
}

TEST_CASE("asymmetric 2x2 instance has a unique equilibrium") {
  pmac::GameConfig cfg = make_config(2, 2);
  pmac::GainMatrix g = make_gains(2, 2, {4.0, 1.0, 1.0, 4.0});
  const pmac::NeReport report = pmac::enumerate_cs_ne(g, cfg);
  REQUIRE(report.equilibria.size() == 1);
  CHECK(report.equilibria[0].profile == pmac::CsProfile{{1, 2}});
  // Entry bookkeeping: utilities sum to the reported NSE.
  const auto& e = report.equilibria[0];
  CHECK(e.utilities.size() == 2);
  CHECK(e.nse == doctest::Approx(e.utilities[0] + e.utilities[1]));
  CHECK(e.label == "ne");
}

TEST_CASE("exact utility ties are counted") {
  pmac::GameConfig cfg = make_config(1, 2);
  pmac::GainMatrix g = make_gains(1, 2, {2.0, 2.0});
  const pmac::NeReport report = pmac::enumerate_cs_ne(g, cfg);
  CHECK(report.equilibria.size() == 2);  // indifferent -> both stay equilibria
  CHECK(report.ties == 2);               // one zero-change deviation per profile
}

TEST_CASE("enumeration cap throws instead of scanning") {
  pmac::GameConfig cfg = make_config(4, 3);
  pmac::RandomStream rng(21, 0);
  pmac::GainMatrix g = random_gains(4, 3, rng);
  CHECK_THROWS_AS(pmac::enumerate_cs_ne(g, cfg, 0.0, 80), pmac::CapExceeded);
}

TEST_CASE("equilibria are exactly the improvement-graph sinks") {
  pmac::RandomStream rng(13, 0);
  for (int instance = 0; instance < 50; ++instance) {
    const int K = 2 + static_cast<int>(rng.next_below(3));
    const int S = 2 + static_cast<int>(rng.next_below(2));
    const double snr = std::pow(10.0, -1.0 + 3.0 * rng.next_uniform());
    pmac::GameConfig cfg = make_config(K, S, 1.0 / snr);
    const pmac::GainMatrix g = random_gains(K, S, rng);

    const pmac::NeReport report = pmac::enumerate_cs_ne(g, cfg);
    const pmac::CsGraph graph = pmac::build_cs_graph(g, cfg);
    const std::vector<std::uint64_t> sinks = graph.sinks();
    const std::set<std::uint64_t> ne_set = ne_indices(report, S);
    CHECK(ne_set == std::set<std::uint64_t>(sinks.begin(), sinks.end()));
    CHECK(report.equilibria.size() >= 1);
    CHECK(report.equilibria.size() <= pmac::ne_upper_bound(K, S));

    // Any two distinct equilibria differ in at least two coordinates:
    // a one-coordinate difference would make one an improving deviation
    // of the other (continuous gains, no exact ties).
    for (std::size_t i = 0; i < report.equilibria.size(); ++i)
      for (std::size_t j = i + 1; j < report.equilibria.size(); ++j)
        CHECK(pmac::profile_distance(report.equilibria[i].profile,
                                     report.equilibria[j].profile) >= 2);
  }
}

TEST_CASE("graph structure: neighbors, edges, and potential ascent") {
  pmac::GameConfig cfg = make_config(3, 2);
  pmac::RandomStream rng(17, 0);
  const pmac::GainMatrix g = random_gains(3, 2, rng);
  const pmac::CsGraph graph = pmac::build_cs_graph(g, cfg);
  REQUIRE(graph.num_vertices() == 8);

  for (std::uint64_t v = 0; v < graph.num_vertices(); ++v) {
    const auto nb = graph.neighbors(v);
    CHECK(nb.size() == 3);  // K*(S-1)
    for (std::uint64_t u : nb) {
      const pmac::CsProfile pv = pmac::decode_profile(v, 3, 2);
      const pmac::CsProfile pu = pmac::decode_profile(u, 3, 2);
      CHECK(pmac::profile_distance(pv, pu) == 1);
    }
  }
  for (const auto& [from, to] : graph.edges())
    CHECK(graph.potentials[to] > graph.potentials[from]);

  // Graph potentials agree with direct evaluation.
  for (std::uint64_t v = 0; v < graph.num_vertices(); ++v) {
    const pmac::PowerProfile p =
        pmac::cs_to_power(pmac::decode_profile(v, 3, 2), cfg);
    CHECK(graph.potentials[v] ==
          doctest::Approx(pmac::potential(p, g, cfg)).epsilon(1e-14));
  }
}

TEST_CASE("sinks of an externally supplied potential table") {
  // Three players, two channels; potential ranking chosen so that exactly
  // (1,1,2) and (2,2,2) are local maxima of unilateral switching.
  const std::vector<double> potentials{6, 2, 4, 5, 8, 3, 1, 7};
  const std::vector<std::uint64_t> sinks =
      pmac::sinks_from_potentials(3, 2, potentials);
  REQUIRE(sinks.size() == 2);
  CHECK(pmac::decode_profile(sinks[0], 3, 2) == pmac::CsProfile{{1, 1, 2}});
  CHECK(pmac::decode_profile(sinks[1], 3, 2) == pmac::CsProfile{{2, 2, 2}});
}

TEST_CASE("graph export lists vertices then edges") {
  pmac::GameConfig cfg = make_config(2, 2);
  pmac::GainMatrix g = make_gains(2, 2, {4.0, 1.0, 1.0, 4.0});
  const pmac::CsGraph graph = pmac::build_cs_graph(g, cfg);
  std::ostringstream out;
  pmac::write_graph(graph, out);
  const std::string text = out.str();
  CHECK(text.find("0: (1,1)") != std::string::npos);
  CHECK(text.find("phi=") != std::string::npos);
  // Vertex 0 = (1,1) improves to vertex 2 = (1,2) among others.
  CHECK(text.find("\n0 2\n") != std::string::npos);
}

TEST_CASE("best-response descent lands on an enumerated equilibrium") {
  pmac::RandomStream rng(19, 0);
  for (int instance = 0; instance < 20; ++instance) {
    pmac::GameConfig cfg = make_config(4, 3, 0.1);
    const pmac::GainMatrix g = random_gains(4, 3, rng);
    const std::set<std::uint64_t> ne_set =
        ne_indices(pmac::enumerate_cs_ne(g, cfg), 3);
    for (int start = 0; start < 5; ++start) {
      const pmac::DescentResult d = pmac::br_descent_sink(
          g, cfg, pmac::random_cs_profile(4, 3, rng));
      CHECK(d.converged);
      CHECK(ne_set.count(pmac::encode_profile(d.profile, 3)) == 1);
    }
  }
}

TEST_CASE("random profiles are well-formed and deterministic") {
  pmac::RandomStream a(3, 9), b(3, 9);
  const pmac::CsProfile pa = pmac::random_cs_profile(5, 3, a);
  const pmac::CsProfile pb = pmac::random_cs_profile(5, 3, b);
  CHECK(pa == pb);
  REQUIRE(pa.num_players() == 5);
  for (int c : pa.choices) {
    CHECK(c >= 1);
    CHECK(c <= 3);
  }
}
