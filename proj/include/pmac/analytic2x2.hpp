// Closed-form equilibrium analysis of the two-player, two-channel case with
// equal budgets, equal noise powers, and equal bandwidths. The gain-ratio
// plane splits into eight power-allocation regions (B_1..B_8, each with an
// explicit equilibrium) plus a degenerate proportional-gains manifold that
// carries a continuum of equilibria; the channel-selection game splits into
// four regions A_1..A_4 with overlap A_1∩A_4 giving two equilibria. Limit
// regimes (SNR -> 0 and SNR -> infinity) and the high-SNR efficiency gaps of
// the two single-channel equilibria are also provided.
#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pmac/model.hpp"

namespace pmac {

// Detection slack for "exactly on a region boundary": classifications whose
// deciding inequality is within this relative slack are tagged boundary=true.
inline constexpr double kBoundaryTol = 1e-12;

// Relative tolerance deciding the degenerate manifold g11*g22 == g12*g21.
inline constexpr double kDegenerateTol = 1e-9;

// A 2x2 instance: both players have budget p_max and both channels have
// noise power sigma2 (snr() = p_max / sigma2 is the common per-channel SNR).
struct ChannelQuad {
  double g11 = 0.0;  // player 1, channel 1
  double g12 = 0.0;  // player 1, channel 2
  double g21 = 0.0;  // player 2, channel 1
  double g22 = 0.0;  // player 2, channel 2
  double p_max = 1.0;
  double sigma2 = 1.0;

  double snr() const { return p_max / sigma2; }
  void validate() const;  // gains > 0 and finite, p_max > 0, sigma2 > 0
};

// The equivalent two-player/two-channel GameConfig (unit bandwidths, noise
// density sigma2) and gain matrix for a quad.
GameConfig quad_config(const ChannelQuad& q);
GainMatrix quad_gains(const ChannelQuad& q);

enum class PaRegion {
  B1, B2, B3, B4, B5, B6, B7, B8,
  DegenerateContinuum,
};

std::string to_string(PaRegion r);

// For the degenerate manifold: equilibria form the segment
//   p11 = intercept + slope * p22,  p22 in [p22_min, p22_max],
// clipped to the feasible square [0, p_max]^2 (parametrization: player 1
// sends p11 on channel 1, player 2 sends p22 on channel 2).
struct ContinuumDescriptor {
  double slope = 0.0;
  double intercept = 0.0;
  double p22_min = 0.0;
  double p22_max = 0.0;

  PowerProfile point(double p22, const ChannelQuad& q) const;
};

struct PaClassification {
  PaRegion region = PaRegion::B1;
  // Closed-form equilibrium coordinates: player 1 = (p11, p_max - p11),
  // player 2 = (p_max - p22, p22). Unset for the continuum.
  double p11 = 0.0;
  double p22 = 0.0;
  PowerProfile equilibrium;  // expanded 2x2 profile (a representative point
                             // for the continuum: midpoint of the segment)
  std::optional<ContinuumDescriptor> continuum;
  bool boundary = false;  // deciding inequality within kBoundaryTol slack
};

// Classifies the power-allocation game of a quad and returns the closed-form
// equilibrium. Exactly one region matches off the boundary set; throws
// ClassificationError if none does (manifestly invalid input).
PaClassification classify_pa_2x2(const ChannelQuad& q,
                                 double boundary_tol = kBoundaryTol);

enum class CsRegion { A1, A2, A3, A4 };

std::string to_string(CsRegion r);

// Channel choices for each CS region's equilibrium: A1 -> (1,2), A2 -> (1,1),
// A3 -> (2,2), A4 -> (2,1).
CsProfile cs_region_profile(CsRegion r);

struct CsClassification {
  std::vector<CsRegion> regions;     // all matching regions (1 or 2)
  std::vector<CsProfile> equilibria; // matching equilibria, same order
  bool multiple = false;             // true iff in A_1 ∩ A_4
  bool boundary = false;
};

// Classifies the channel-selection game of a quad. The four regions cover
// the gain orthant; their only overlap is A_1 ∩ A_4 (two equilibria).
CsClassification classify_cs_2x2(const ChannelQuad& q,
                                 double boundary_tol = kBoundaryTol);

// SNR -> 0 limit: both games collapse onto "each player rides its best
// channel alone". Throws TieError if some player's two gains are equal.
CsProfile low_snr_limit_ne(const ChannelQuad& q);

// SNR -> infinity limit of the channel-selection game: the two orthogonal
// profiles (1,2) and (2,1) are equilibria for every gain realization.
// Index 0 is the profile used by braess_gap(1), index 1 by braess_gap(4).
std::array<CsProfile, 2> high_snr_cs_ne(const ChannelQuad& q);

enum class HighSnrPaRegion { B1p, B4p, B5p, B6p, B7p, B8p };

std::string to_string(HighSnrPaRegion r);

// SNR -> infinity region of the power-allocation game (membership tests on
// raw gains only). Throws TieError on exact boundary ties.
HighSnrPaRegion high_snr_pa_region(const ChannelQuad& q);

// The equilibrium profile belonging to high_snr_pa_region(q), with interior
// coordinates evaluated at the quad's own (finite) SNR.
PowerProfile high_snr_pa_equilibrium(const ChannelQuad& q);

// Gap between the network spectral efficiency of a single-channel
// (channel-selection) equilibrium and that of the power-allocation
// equilibrium of the same quad: NSE(cs) - NSE(pa). `which` selects the
// orthogonal profile: 1 -> (1,2), 4 -> (2,1). If snr_override is given the
// quad's noise power is rescaled so p_max/sigma2 equals it.
double braess_gap(const ChannelQuad& q, int which,
                  std::optional<double> snr_override = std::nullopt);

// Closed-form expression of the same gap in terms of psi(x) = 1 + SNR*x,
// valid when the quad's power-allocation region is B_5 (which=1) or B_8
// (which=4); throws std::domain_error otherwise. Agrees with braess_gap to
// ~1e-8 in its domain and diverges to +infinity on the B'_5 high-SNR region.
double braess_gap_closed_form(const ChannelQuad& q, int which);

// CSV export of closed-form region labels over a log-spaced grid of the two
// gain ratios r1 = g11/g12 and r2 = g21/g22 (g12 = g22 = 1 fixed):
// header "r1,r2,pa_region,cs_regions" and one row per grid point.
void write_region_map_csv(std::ostream& out, double snr, int grid_points,
                          double ratio_min, double ratio_max);

}  // namespace pmac
