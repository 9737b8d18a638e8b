#include "pmac/analytic2x2.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "pmac/errors.hpp"
#include "pmac/waterfill.hpp"

namespace pmac {

namespace {

// Relative margin of the inequality lhs >= rhs (positive when satisfied
// strictly); used for boundary detection.
double margin(double lhs, double rhs) {
  const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
  return (lhs - rhs) / scale;
}

struct QuadDerived {
  double rho;   // SNR
  double r1;    // g11/g12
  double r2;    // g21/g22
  double t_joint_hi;   // 1 + rho*(g11+g21): both-on-channel-1 threshold
  double t_joint_lo;   // 1/(1 + rho*(g12+g22)): both-on-channel-2 threshold
  double t_cross_a;    // psi(g11)/psi(g22)
  double t_cross_d;    // psi(g21)/psi(g12)

  explicit QuadDerived(const ChannelQuad& q) {
    rho = q.snr();
    r1 = q.g11 / q.g12;
    r2 = q.g21 / q.g22;
    t_joint_hi = 1.0 + rho * (q.g11 + q.g21);
    t_joint_lo = 1.0 / (1.0 + rho * (q.g12 + q.g22));
    t_cross_a = (1.0 + rho * q.g11) / (1.0 + rho * q.g22);
    t_cross_d = (1.0 + rho * q.g21) / (1.0 + rho * q.g12);
  }
};

PowerProfile expand_quad_profile(const ChannelQuad& q, double p11, double p22) {
  PowerProfile p = PowerProfile::zeros(2, 2);
  p.at(0, 0) = p11;
  p.at(0, 1) = q.p_max - p11;
  p.at(1, 0) = q.p_max - p22;
  p.at(1, 1) = p22;
  return p;
}

double clamp01(double v, double p_max) {
  return std::min(std::max(v, 0.0), p_max);
}

// Interior water-filling coordinate for the player that splits power over
// both channels (equal bandwidth fractions): equal water levels give
// p_own + floor_own = p_other + floor_other with p_own + p_other = budget.
double interior_coordinate(double budget, double floor_own, double floor_other) {
  return 0.5 * (budget + floor_other - floor_own);
}

}  // namespace

void ChannelQuad::validate() const {
  const double values[] = {g11, g12, g21, g22, p_max, sigma2};
  for (double v : values)
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument("quad: gains, p_max and sigma2 must be positive");
}

GameConfig quad_config(const ChannelQuad& q) {
  GameConfig cfg;
  cfg.num_players = 2;
  cfg.num_channels = 2;
  cfg.max_power = {q.p_max, q.p_max};
  cfg.noise_density = q.sigma2;
  cfg.bandwidths = {1.0, 1.0};
  return cfg;
}

GainMatrix quad_gains(const ChannelQuad& q) {
  GainMatrix g;
  g.num_players = 2;
  g.num_channels = 2;
  g.values = {q.g11, q.g12, q.g21, q.g22};
  return g;
}

std::string to_string(PaRegion r) {
  switch (r) {
    case PaRegion::B1: return "B1";
    case PaRegion::B2: return "B2";
    case PaRegion::B3: return "B3";
    case PaRegion::B4: return "B4";
    case PaRegion::B5: return "B5";
    case PaRegion::B6: return "B6";
    case PaRegion::B7: return "B7";
    case PaRegion::B8: return "B8";
    case PaRegion::DegenerateContinuum: return "degenerate-continuum";
  }
  return "?";
}

std::string to_string(CsRegion r) {
  switch (r) {
    case CsRegion::A1: return "A1";
    case CsRegion::A2: return "A2";
    case CsRegion::A3: return "A3";
    case CsRegion::A4: return "A4";
  }
  return "?";
}

std::string to_string(HighSnrPaRegion r) {
  switch (r) {
    case HighSnrPaRegion::B1p: return "B1p";
    case HighSnrPaRegion::B4p: return "B4p";
    case HighSnrPaRegion::B5p: return "B5p";
    case HighSnrPaRegion::B6p: return "B6p";
    case HighSnrPaRegion::B7p: return "B7p";
    case HighSnrPaRegion::B8p: return "B8p";
  }
  return "?";
}

PowerProfile ContinuumDescriptor::point(double p22, const ChannelQuad& q) const {
  const double p11 = intercept + slope * p22;
  return expand_quad_profile(q, p11, p22);
}

PaClassification classify_pa_2x2(const ChannelQuad& q, double boundary_tol) {
  q.validate();
  const QuadDerived d(q);

  PaClassification result;

  // Proportional-gain manifold g11*g22 == g12*g21: a whole segment of
  // equilibria when the common column ratio makes the segment cross the
  // open power square.
  const double det = q.g12 * q.g21 - q.g11 * q.g22;
  const double det_scale = std::max(q.g11 * q.g22, q.g12 * q.g21);
  if (std::abs(det) <= kDegenerateTol * det_scale) {
    const double r = q.g11 / q.g12;
    if (r > d.t_joint_lo && r < d.t_joint_hi) {
      ContinuumDescriptor line;
      line.slope = q.g21 / q.g11;
      line.intercept = 0.5 * (q.p_max * (1.0 - line.slope) +
                              q.sigma2 * (1.0 / q.g12 - 1.0 / q.g11));
      line.p22_min = std::max(0.0, -line.intercept / line.slope);
      line.p22_max = std::min(q.p_max, (q.p_max - line.intercept) / line.slope);
      if (!(line.p22_min <= line.p22_max))
        throw ClassificationError(
            "degenerate quad: equilibrium segment does not meet the power square");
      result.region = PaRegion::DegenerateContinuum;
      result.continuum = line;
      const double mid = 0.5 * (line.p22_min + line.p22_max);
      result.p22 = mid;
      result.p11 = line.intercept + line.slope * mid;
      result.equilibrium = expand_quad_profile(q, result.p11, result.p22);
      result.boundary =
          std::min(std::abs(margin(r, d.t_joint_lo)),
                   std::abs(margin(d.t_joint_hi, r))) <= boundary_tol;
      return result;
            }
    // Degenerate gains whose segment misses the square behave like a corner
    // instance; fall through to the region tests below.
  }

  // Each region's membership margins (all >= 0 means inside); the equilibrium
  // coordinates (p11, p22) parameterize player 1 = (p11, p_max - p11),
  // player 2 = (p_max - p22, p22).
  struct Candidate {
    PaRegion region;
    double margins[3];
    int num_margins;
    double p11, p22;
  };

  const double P = q.p_max;
  const double s2 = q.sigma2;
  Candidate candidates[] = {
      {PaRegion::B1,
       {margin(d.r1, d.t_cross_a), margin(d.t_cross_a, d.r2)},
       2,
       P,
       P},
      {PaRegion::B2,
       {margin(d.r1, d.t_joint_hi), margin(d.r2, d.t_joint_hi)},
       2,
       P,
       0.0},
      {PaRegion::B3,
       {margin(d.t_joint_lo, d.r1), margin(d.t_joint_lo, d.r2)},
       2,
       0.0,
       P},
      {PaRegion::B4,
       {margin(d.t_cross_d, d.r1), margin(d.r2, d.t_cross_d)},
       2,
       0.0,
       0.0},
      {PaRegion::B5,
       {margin(d.r1, d.r2), margin(d.r2, d.t_cross_a), margin(d.t_joint_hi, d.r2)},
       3,
       P,
       interior_coordinate(P, s2 / q.g22, (s2 + q.g11 * P) / q.g21)},
      {PaRegion::B6,
       {margin(d.r1, d.r2), margin(d.r1, d.t_joint_lo), margin(d.t_cross_a, d.r1)},
       3,
       interior_coordinate(P, s2 / q.g11, (s2 + q.g22 * P) / q.g12),
       P},
      {PaRegion::B7,
       {margin(d.r2, d.r1), margin(d.r1, d.t_cross_d), margin(d.t_joint_hi, d.r1)},
       3,
       interior_coordinate(P, (s2 + q.g21 * P) / q.g11, s2 / q.g12),
       0.0},
      {PaRegion::B8,
       {margin(d.r2, d.r1), margin(d.r2, d.t_joint_lo), margin(d.t_cross_d, d.r2)},
       3,
       0.0,
       interior_coordinate(P, (s2 + q.g12 * P) / q.g22, s2 / q.g21)},
  };

  const Candidate* best = nullptr;
  double best_min_margin = -1.0;
  std::string residuals;
  for (const Candidate& c : candidates) {
    double min_margin = 1e300;
    for (int i = 0; i < c.num_margins; ++i)
      min_margin = std::min(min_margin, c.margins[i]);
    residuals += (residuals.empty() ? "" : ", ") + to_string(c.region) + "=" +
                 std::to_string(min_margin);
    if (min_margin >= 0.0 && (best == nullptr || min_margin > best_min_margin)) {
      best = &c;
      best_min_margin = min_margin;
    }
  }
  if (best == nullptr)
    throw ClassificationError("quad matches no equilibrium region; margins: " +
                              residuals);

  result.region = best->region;
  result.p11 = clamp01(best->p11, P);
  result.p22 = clamp01(best->p22, P);
  result.equilibrium = expand_quad_profile(q, result.p11, result.p22);
  result.boundary = best_min_margin <= boundary_tol ||
                    std::abs(det) <= boundary_tol * det_scale;
  return result;
}

CsProfile cs_region_profile(CsRegion r) {
  switch (r) {
    case CsRegion::A1: return CsProfile{{1, 2}};
    case CsRegion::A2: return CsProfile{{1, 1}};
    case CsRegion::A3: return CsProfile{{2, 2}};
    case CsRegion::A4: return CsProfile{{2, 1}};
  }
  throw std::invalid_argument("unknown region");
}

CsClassification classify_cs_2x2(const ChannelQuad& q, double boundary_tol) {
  q.validate();
  const QuadDerived d(q);
  const double rho = d.rho;

  // Membership margins per region; r1 = g11/g12, r2 = g21/g22.
  const double m[4][2] = {
      {margin(d.r1, 1.0 / (1.0 + rho * q.g22)),
       margin(1.0 + rho * q.g11, d.r2)},                       // A1 -> (1,2)
      {margin(d.r1, 1.0 + rho * q.g21),
       margin(d.r2, 1.0 + rho * q.g11)},                       // A2 -> (1,1)
      {margin(1.0 / (1.0 + rho * q.g22), d.r1),
       margin(1.0 / (1.0 + rho * q.g12), d.r2)},               // A3 -> (2,2)
      {margin(1.0 + rho * q.g21, d.r1),
       margin(d.r2, 1.0 / (1.0 + rho * q.g12))},               // A4 -> (2,1)
  };

  CsClassification result;
  std::string residuals;
  for (int i = 0; i < 4; ++i) {
    const double min_margin = std::min(m[i][0], m[i][1]);
    residuals += (residuals.empty() ? "A" : ", A") + std::to_string(i + 1) +
                 "=" + std::to_string(min_margin);
    if (min_margin >= 0.0) {
      const auto region = static_cast<CsRegion>(i);
      result.regions.push_back(region);
      result.equilibria.push_back(cs_region_profile(region));
      if (min_margin <= boundary_tol) result.boundary = true;
    }
  }
  if (result.regions.empty())
    throw ClassificationError(
        "quad matches no channel-selection region; margins: " + residuals);

  bool a1 = false, a4 = false;
  for (CsRegion r : result.regions) {
    a1 |= r == CsRegion::A1;
    a4 |= r == CsRegion::A4;
  }
  result.multiple = a1 && a4;
  // Overlaps other than A1∩A4 only occur on boundary ties.
  if (result.regions.size() > 1 && !result.multiple) result.boundary = true;
  return result;
}

CsProfile low_snr_limit_ne(const ChannelQuad& q) {
  q.validate();
  if (q.g11 == q.g12 || q.g21 == q.g22)
    throw TieError("low-SNR limit undefined: a player's gains are tied");
  return CsProfile{{q.g11 > q.g12 ? 1 : 2, q.g21 > q.g22 ? 1 : 2}};
}

std::array<CsProfile, 2> high_snr_cs_ne(const ChannelQuad& q) {
  q.validate();
  return {CsProfile{{1, 2}}, CsProfile{{2, 1}}};
}

HighSnrPaRegion high_snr_pa_region(const ChannelQuad& q) {
  q.validate();
  const double r1 = q.g11 / q.g12;
  const double r2 = q.g21 / q.g22;
  if (q.g22 >= q.g12 && q.g21 <= q.g11) return HighSnrPaRegion::B1p;
  if (q.g11 <= q.g21 && q.g12 >= q.g22) return HighSnrPaRegion::B4p;
  if (r1 >= r2 && q.g21 > q.g11) return HighSnrPaRegion::B5p;
  if (r1 >= r2 && q.g22 < q.g12) return HighSnrPaRegion::B6p;
  if (r1 <= r2 && q.g11 > q.g21) return HighSnrPaRegion::B7p;
  if (r1 <= r2 && q.g12 < q.g22) return HighSnrPaRegion::B8p;
  throw TieError("high-SNR region undefined: boundary tie");
}

PowerProfile high_snr_pa_equilibrium(const ChannelQuad& q) {
  const HighSnrPaRegion region = high_snr_pa_region(q);
  const double P = q.p_max;
  const double s2 = q.sigma2;
  double p11 = 0.0, p22 = 0.0;
  switch (region) {
    case HighSnrPaRegion::B1p: p11 = P; p22 = P; break;
    case HighSnrPaRegion::B4p: p11 = 0.0; p22 = 0.0; break;
    case HighSnrPaRegion::B5p:
      p11 = P;
      p22 = interior_coordinate(P, s2 / q.g22, (s2 + q.g11 * P) / q.g21);
      break;
    case HighSnrPaRegion::B6p:
      p11 = interior_coordinate(P, s2 / q.g11, (s2 + q.g22 * P) / q.g12);
      p22 = P;
      break;
    case HighSnrPaRegion::B7p:
      p11 = interior_coordinate(P, (s2 + q.g21 * P) / q.g11, s2 / q.g12);
      p22 = 0.0;
      break;
    case HighSnrPaRegion::B8p:
      p11 = 0.0;
      p22 = interior_coordinate(P, (s2 + q.g12 * P) / q.g22, s2 / q.g21);
      break;
  }
  return expand_quad_profile(q, clamp01(p11, P), clamp01(p22, P));
}

double braess_gap(const ChannelQuad& q, int which,
                  std::optional<double> snr_override) {
  if (which != 1 && which != 4)
    throw std::invalid_argument("braess_gap: which must be 1 or 4");
  ChannelQuad quad = q;
  if (snr_override) {
    if (!(*snr_override > 0.0))
      throw std::invalid_argument("braess_gap: SNR override must be positive");
    quad.sigma2 = quad.p_max / *snr_override;
  }
  quad.validate();

  const GameConfig cfg = quad_config(quad);
  const GainMatrix gains = quad_gains(quad);
  const CsProfile cs = which == 1 ? CsProfile{{1, 2}} : CsProfile{{2, 1}};
  const PowerProfile cs_power = cs_to_power(cs, cfg);
  const PaClassification pa = classify_pa_2x2(quad);
  return nse(cs_power, gains, cfg) - nse(pa.equilibrium, gains, cfg);
}

double braess_gap_closed_form(const ChannelQuad& q, int which) {
  q.validate();
  const double rho = q.snr();
  const auto psi = [rho](double x) { return 1.0 + rho * x; };
  const PaClassification pa = classify_pa_2x2(q);

  if (which == 1) {
    if (pa.region != PaRegion::B5)
      throw std::domain_error(
          "closed-form gap 1 requires the B5 power-allocation region");
    const double ratio = q.g21 / q.g22;
    return 0.5 * (2.0 - 2.0 * std::log2(1.0 + ratio * psi(q.g22) / psi(q.g11)) -
                  std::log2(1.0 + (1.0 / ratio) * psi(q.g11) / psi(q.g22)) +
                  std::log2(ratio + psi(q.g21 - q.g11)));
  }
  if (which == 4) {
    if (pa.region != PaRegion::B8)
      throw std::domain_error(
          "closed-form gap 4 requires the B8 power-allocation region");
    const double ratio = q.g22 / q.g21;
    return 0.5 * (2.0 - 2.0 * std::log2(1.0 + ratio * psi(q.g21) / psi(q.g12)) -
                  std::log2(1.0 + (1.0 / ratio) * psi(q.g12) / psi(q.g21)) +
                  std::log2(ratio + psi(q.g22 - q.g12)));
  }
  throw std::invalid_argument("braess_gap_closed_form: which must be 1 or 4");
}

void write_region_map_csv(std::ostream& out, double snr, int grid_points,
                          double ratio_min, double ratio_max) {
  if (grid_points < 2 || !(ratio_min > 0.0) || !(ratio_max > ratio_min) ||
      !(snr > 0.0))
    throw std::invalid_argument("region map: need snr>0, 2+ grid points, 0<min<max");

  out << "r1,r2,pa_region,cs_regions\n";
  char buffer[64];
  const double log_min = std::log(ratio_min);
  const double step = (std::log(ratio_max) - log_min) / (grid_points - 1);
  for (int i = 0; i < grid_points; ++i) {
    const double r1 = std::exp(log_min + i * step);
    for (int j = 0; j < grid_points; ++j) {
      const double r2 = std::exp(log_min + j * step);
      ChannelQuad q;
      q.g11 = r1;
      q.g12 = 1.0;
      q.g21 = r2;
      q.g22 = 1.0;
      q.p_max = 1.0;
      q.sigma2 = 1.0 / snr;
      std::string pa_label;
      try {
        pa_label = to_string(classify_pa_2x2(q).region);
      } catch (const ClassificationError&) {
        pa_label = "boundary";
      }
      std::string cs_label;
      const CsClassification cs = classify_cs_2x2(q);
      for (std::size_t n = 0; n < cs.regions.size(); ++n) {
        if (n) cs_label += '|';
        cs_label += to_string(cs.regions[n]);
      }
      std::snprintf(buffer, sizeof buffer, "%.17g", r1);
      out << buffer << ',';
      std::snprintf(buffer, sizeof buffer, "%.17g", r2);
      out << buffer << ',' << pa_label << ',' << cs_label << '\n';
    }
  }
}

}  // namespace pmac
