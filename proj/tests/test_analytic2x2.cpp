#include "doctest.h"

#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "pmac/analytic2x2.hpp"
#include "pmac/enumerate.hpp"
#include "pmac/errors.hpp"
#include "pmac/model.hpp"
#include "pmac/rng.hpp"
#include "pmac/waterfill.hpp"

namespace {

pmac::ChannelQuad quad(double g11, double g12, double g21, double g22,
                       double snr = 1.0) {
  pmac::ChannelQuad q;
  q.g11 = g11;
  q.g12 = g12;
  q.g21 = g21;
  q.g22 = g22;
  q.p_max = 1.0;
  q.sigma2 = 1.0 / snr;
  return q;
}

}  // namespace

TEST_CASE("quad validation") {
  CHECK_NOTHROW(quad(1, 2, 3, 4).validate());
  CHECK_THROWS_AS(quad(0, 2, 3, 4).validate(), std::invalid_argument);
  CHECK_THROWS_AS(quad(-1, 2, 3, 4).validate(), std::invalid_argument);
  pmac::ChannelQuad q = quad(1, 2, 3, 4);
  q.sigma2 = 0.0;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
}

TEST_CASE("quad expansion to a game instance") {
  const pmac::ChannelQuad q = quad(1, 2, 3, 4, 10.0);
  const pmac::GameConfig cfg = pmac::quad_config(q);
  CHECK(cfg.num_players == 2);
  CHECK(cfg.num_channels == 2);
  CHECK(cfg.noise_power(0) == doctest::Approx(0.1));
  const pmac::GainMatrix g = pmac::quad_gains(q);
  CHECK(g.at(0, 1) == 2.0);
  CHECK(g.at(1, 0) == 3.0);
  CHECK(q.snr() == doctest::Approx(10.0));
}

TEST_CASE("full-spread corner region") {
  const pmac::ChannelQuad q = quad(4, 1, 1, 4);
  const pmac::PaClassification c = pmac::classify_pa_2x2(q);
  CHECK(c.region == pmac::PaRegion::B1);
  CHECK_FALSE(c.boundary);
  CHECK(c.p11 == doctest::Approx(1.0));
  CHECK(c.p22 == doctest::Approx(1.0));
  CHECK(c.equilibrium.at(0, 0) == doctest::Approx(1.0));
  CHECK(c.equilibrium.at(0, 1) == doctest::Approx(0.0));
  CHECK(c.equilibrium.at(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("interior regions match hand-solved equilibria") {
  SUBCASE("player 2 interior") {
    const pmac::PaClassification c = pmac::classify_pa_2x2(quad(1, 2, 3, 4));
    CHECK(c.region == pmac::PaRegion::B8);
    CHECK(c.p11 == doctest::Approx(0.0));
    CHECK(c.p22 == doctest::Approx(7.0 / 24.0).epsilon(1e-14));
  }
  SUBCASE("player 2 interior, player 1 on channel 1") {
    const pmac::PaClassification c =
        pmac::classify_pa_2x2(quad(2, 0.5, 1.5, 0.6));
    CHECK(c.region == pmac::PaRegion::B5);
    CHECK(c.p11 == doctest::Approx(1.0));
    CHECK(c.p22 == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  }
}

TEST_CASE("classified equilibria verify against the iterative solver") {
  pmac::RandomStream rng(23, 0);
  int boundary = 0;
  for (int i = 0; i < 2000; ++i) {
    const double snr = std::pow(10.0, -1.0 + 3.0 * rng.next_uniform());
    const pmac::ChannelQuad q = quad(rng.next_exp1(), rng.next_exp1(),
                                     rng.next_exp1(), rng.next_exp1(), snr);
    const pmac::PaClassification c = pmac::classify_pa_2x2(q);
    if (c.boundary) {
      ++boundary;
      continue;
    }
    const pmac::NeResidualReport report = pmac::verify_pa_ne(
        c.equilibrium, pmac::quad_gains(q), pmac::quad_config(q), 1e-6);
    CHECK(report.is_ne);
  }
  CHECK(boundary < 20);  // boundary-tolerance draws are rare
}

TEST_CASE("degenerate proportional gains carry a continuum") {
  SUBCASE("symmetric instance") {
    const pmac::PaClassification c = pmac::classify_pa_2x2(quad(1, 1, 1, 1));
    REQUIRE(c.region == pmac::PaRegion::DegenerateContinuum);
    REQUIRE(c.continuum.has_value());
    CHECK(c.continuum->slope == doctest::Approx(1.0));
    CHECK(c.continuum->intercept == doctest::Approx(0.0));
    CHECK(c.continuum->p22_min == doctest::Approx(0.0));
    CHECK(c.continuum->p22_max == doctest::Approx(1.0));
    // Representative point is the segment midpoint.
    CHECK(c.equilibrium.at(0, 0) == doctest::Approx(0.5));
    CHECK(c.equilibrium.at(1, 1) == doctest::Approx(0.5));
  }

  SUBCASE("sampled points along a scaled-gains line are all equilibria") {
    // Player 2's gains are 1.5x player 1's: ratio test is exact.
    const pmac::ChannelQuad q = quad(2.0, 0.5, 3.0, 0.75);
    const pmac::PaClassification c = pmac::classify_pa_2x2(q);
    REQUIRE(c.region == pmac::PaRegion::DegenerateContinuum);
    REQUIRE(c.continuum.has_value());
    const pmac::GainMatrix g = pmac::quad_gains(q);
    const pmac::GameConfig cfg = pmac::quad_config(q);
    for (int i = 0; i <= 10; ++i) {
      const double p22 = c.continuum->p22_min +
                         (c.continuum->p22_max - c.continuum->p22_min) * i / 10.0;
      const pmac::PowerProfile point = c.continuum->point(p22, q);
      const pmac::NeResidualReport report =
          pmac::verify_pa_ne(point, g, cfg, 1e-6);
      CHECK(report.is_ne);
    }
  }

  SUBCASE("proportional gains outside the ratio interval fall back to corners") {
    // Proportional, but r = g11/g12 = 20 exceeds 1 + snr*(g11+g21) at low snr.
    const pmac::ChannelQuad q = quad(2.0, 0.1, 4.0, 0.2, 0.1);
    const pmac::PaClassification c = pmac::classify_pa_2x2(q);
    CHECK(c.region != pmac::PaRegion::DegenerateContinuum);
  }
}

TEST_CASE("channel-selection regions and equilibria") {
  SUBCASE("orthogonal preference") {
    const pmac::CsClassification c = pmac::classify_cs_2x2(quad(4, 1, 1, 4));
    REQUIRE(c.regions.size() == 1);
    CHECK(c.regions[0] == pmac::CsRegion::A1);
    CHECK(c.equilibria[0] == pmac::CsProfile{{1, 2}});
    CHECK_FALSE(c.multiple);
  }
  SUBCASE("both players on channel 1") {
    // Needs r1 >= 1 + snr*g21 and r2 >= 1 + snr*g11, e.g. tiny cross gains.
    const pmac::CsClassification c =
        pmac::classify_cs_2x2(quad(4, 0.1, 3, 0.1));
    REQUIRE(c.regions.size() == 1);
    CHECK(c.regions[0] == pmac::CsRegion::A2);
    CHECK(c.equilibria[0] == pmac::CsProfile{{1, 1}});
  }
  SUBCASE("overlap region carries two equilibria") {
    const pmac::CsClassification c = pmac::classify_cs_2x2(quad(1, 1, 1, 1));
    CHECK(c.multiple);
    REQUIRE(c.regions.size() == 2);
    const std::set<std::vector<int>> found{c.equilibria[0].choices,
                                           c.equilibria[1].choices};
    CHECK(found == std::set<std::vector<int>>{{1, 2}, {2, 1}});
  }
  SUBCASE("classified equilibria match enumeration") {
    pmac::RandomStream rng(29, 0);
    for (int i = 0; i < 500; ++i) {
      const pmac::ChannelQuad q = quad(rng.next_exp1(), rng.next_exp1(),
                                       rng.next_exp1(), rng.next_exp1(), 10.0);
      const pmac::CsClassification c = pmac::classify_cs_2x2(q);
      if (c.boundary) continue;
      std::set<std::vector<int>> analytic;
      for (const auto& e : c.equilibria) analytic.insert(e.choices);
      std::set<std::vector<int>> enumerated;
      for (const auto& e :
           pmac::enumerate_cs_ne(pmac::quad_gains(q), pmac::quad_config(q)).equilibria)
        enumerated.insert(e.profile.choices);
      CHECK(analytic == enumerated);
    }
  }
}

TEST_CASE("low-SNR limit picks each player's best channel") {
  CHECK(pmac::low_snr_limit_ne(quad(4, 1, 1, 4)) == pmac::CsProfile{{1, 2}});
  CHECK(pmac::low_snr_limit_ne(quad(1, 4, 4, 1)) == pmac::CsProfile{{2, 1}});
  CHECK_THROWS_AS(pmac::low_snr_limit_ne(quad(2, 2, 1, 3)), pmac::TieError);
}

TEST_CASE("high-SNR limits") {
  SUBCASE("channel-selection limit always has the two orthogonal profiles") {
    const auto profiles = pmac::high_snr_cs_ne(quad(1, 2, 3, 4));
    CHECK(profiles[0] == pmac::CsProfile{{1, 2}});
    CHECK(profiles[1] == pmac::CsProfile{{2, 1}});
  }
  SUBCASE("power-allocation limit regions") {
    CHECK(pmac::high_snr_pa_region(quad(4, 1, 1, 4)) ==
          pmac::HighSnrPaRegion::B1p);
    CHECK(pmac::high_snr_pa_region(quad(1, 2, 3, 4)) ==
          pmac::HighSnrPaRegion::B8p);
    CHECK(pmac::high_snr_pa_region(quad(1, 0.1, 2, 0.25)) ==
          pmac::HighSnrPaRegion::B5p);
    // The first-match order resolves boundary overlaps: proportional rows
    // and fully symmetric gains land in the all-on-channel-1 region.
    CHECK(pmac::high_snr_pa_region(quad(1, 2, 1, 2)) ==
          pmac::HighSnrPaRegion::B1p);
    CHECK(pmac::high_snr_pa_region(quad(1, 1, 1, 1)) ==
          pmac::HighSnrPaRegion::B1p);
  }
  SUBCASE("limit region covers random draws") {
    pmac::RandomStream rng(31, 0);
    for (int i = 0; i < 2000; ++i) {
      const pmac::ChannelQuad q = quad(rng.next_exp1(), rng.next_exp1(),
                                       rng.next_exp1(), rng.next_exp1());
      CHECK_NOTHROW(pmac::high_snr_pa_region(q));  // ties have measure zero
    }
  }
  SUBCASE("limit equilibrium verifies at high finite SNR") {
    pmac::RandomStream rng(37, 0);
    for (int i = 0; i < 200; ++i) {
      const pmac::ChannelQuad q = quad(rng.next_exp1(), rng.next_exp1(),
                                       rng.next_exp1(), rng.next_exp1(), 1e4);
      const pmac::PaClassification c = pmac::classify_pa_2x2(q);
      if (c.boundary || c.region == pmac::PaRegion::DegenerateContinuum)
        continue;
      const pmac::PowerProfile limit = pmac::high_snr_pa_equilibrium(q);
      // At 40 dB the finite-SNR classification and the limit agree for
      // non-boundary draws.
      for (int k = 0; k < 2; ++k)
        for (int s = 0; s < 2; ++s)
          CHECK(limit.at(k, s) ==
                doctest::Approx(c.equilibrium.at(k, s)).epsilon(1e-6));
    }
  }
}

TEST_CASE("single-channel efficiency gaps") {
  SUBCASE("gap vanishes when the spread equilibrium is orthogonal") {
    // Quad in the full-spread corner whose equilibrium equals profile (1,2).
    CHECK(pmac::braess_gap(quad(4, 1, 1, 4), 1) ==
          doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("closed form matches direct evaluation on its region") {
    const pmac::ChannelQuad q = quad(1, 0.1, 2, 0.25, 1e6);
    REQUIRE(pmac::classify_pa_2x2(q).region == pmac::PaRegion::B5);
    const double direct = pmac::braess_gap(q, 1);
    const double closed = pmac::braess_gap_closed_form(q, 1);
    CHECK(closed == doctest::Approx(direct).epsilon(1e-8));
    CHECK(direct > 0.0);  // single-channel equilibrium beats spreading here

    // The mirrored gap is exact on the channel-swapped region.
    const pmac::ChannelQuad m = quad(0.1, 1.0, 0.25, 2.0, 1e6);
    REQUIRE(pmac::classify_pa_2x2(m).region == pmac::PaRegion::B8);
    CHECK(pmac::braess_gap_closed_form(m, 4) ==
          doctest::Approx(pmac::braess_gap(m, 4)).epsilon(1e-8));
  }
  SUBCASE("closed form is undefined off its region") {
    CHECK_THROWS_AS(pmac::braess_gap_closed_form(quad(4, 1, 1, 4), 1),
                    std::domain_error);
    CHECK_THROWS_AS(pmac::braess_gap_closed_form(quad(1, 0.1, 2, 0.25, 1e6), 4),
                    std::domain_error);
    CHECK_THROWS_AS(pmac::braess_gap_closed_form(quad(1, 0.1, 2, 0.25, 1e6), 2),
                    std::invalid_argument);
  }
  SUBCASE("first gap grows without bound with SNR on its limit region") {
    const pmac::ChannelQuad q = quad(1, 0.1, 2, 0.25);
    REQUIRE(pmac::high_snr_pa_region(q) == pmac::HighSnrPaRegion::B5p);
    const double d20 = pmac::braess_gap(q, 1, 1e2);
    const double d30 = pmac::braess_gap(q, 1, 1e3);
    const double d40 = pmac::braess_gap(q, 1, 1e4);
    CHECK(d20 < d30);
    CHECK(d30 < d40);
    // The mirrored profile's gap diverges too: it grows like half a bit
    // per 3 dB once spreading wastes half the degrees of freedom.
    const double e30 = pmac::braess_gap(q, 4, 1e3);
    const double e40 = pmac::braess_gap(q, 4, 1e4);
    CHECK(e40 > e30);
    CHECK(e40 > 1.0);
  }
  SUBCASE("snr override rescales the noise power") {
    const pmac::ChannelQuad q = quad(1, 0.1, 2, 0.25, 100.0);
    CHECK(pmac::braess_gap(q, 1) ==
          doctest::Approx(pmac::braess_gap(quad(1, 0.1, 2, 0.25), 1, 100.0))
              .epsilon(1e-12));
  }
}

TEST_CASE("boundary draws are flagged") {
  // r2 exactly equals the full-spread threshold psi(g11)/psi(g22) = 1.
  const pmac::ChannelQuad q = quad(1.0, 0.5, 1.0, 1.0);
  const pmac::PaClassification c = pmac::classify_pa_2x2(q);
  CHECK(c.boundary);
}

TEST_CASE("region names render") {
  CHECK(pmac::to_string(pmac::PaRegion::B3) == "B3");
  CHECK(pmac::to_string(pmac::PaRegion::DegenerateContinuum) ==
        "degenerate-continuum");
  CHECK(pmac::to_string(pmac::CsRegion::A4) == "A4");
  CHECK(pmac::to_string(pmac::HighSnrPaRegion::B6p) == "B6p");
}

TEST_CASE("region map export has the documented shape") {
  std::ostringstream out;
  pmac::write_region_map_csv(out, 10.0, 5, 0.1, 10.0);
  std::istringstream in(out.str());
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "r1,r2,pa_region,cs_regions");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 25);
}
