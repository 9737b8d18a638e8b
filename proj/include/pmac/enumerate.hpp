// Exhaustive and sampled analysis of the channel-selection game, where each
// player puts its whole budget on a single channel. Pure Nash equilibria are
// the profiles with no improving unilateral channel switch; equivalently the
// sinks of the best-response digraph oriented by increasing potential.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "pmac/model.hpp"
#include "pmac/rng.hpp"

namespace pmac {

inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 24;
inline constexpr std::uint64_t kDefaultGraphCap = std::uint64_t{1} << 16;

// S^K as uint64, throwing CapExceeded(required=saturated value, cap) when the
// profile count exceeds `cap`.
std::uint64_t checked_profile_count(int num_players, int num_channels,
                                    std::uint64_t cap);

// Mixed-radix codec between action profiles and vertex indices in [0, S^K):
// player 0 is the fastest-varying (least significant) digit, so index 0 is
// "everyone on channel 1" and index 1 moves player 1 to channel 2.
std::uint64_t encode_profile(const CsProfile& profile, int num_channels);
CsProfile decode_profile(std::uint64_t index, int num_players, int num_channels);

// Number of coordinates where the two profiles differ (Hamming distance).
int profile_distance(const CsProfile& a, const CsProfile& b);

// Upper bound on the number of pure channel-selection equilibria:
//   1 + (S-1) * sum over even i in {2,4,...} up to K of C(K, i).
// Grows like S^K / 2 for large K; callers compare enumerated counts to it.
std::uint64_t ne_upper_bound(int num_players, int num_channels);

// Closed-form estimate of the expected fraction of profiles that are
// equilibria for i.i.d. continuous gains in the many-player regime:
// (S-1) * (2/S)^K.
double ne_fraction_estimate(int num_players, int num_channels);

struct NeEntry {
  CsProfile profile;
  double potential = 0.0;
  std::vector<double> utilities;  // per player
  double nse = 0.0;
  std::string label;              // free-form classification tag ("ne", "sampled-sink", ...)
};

struct NeReport {
  std::vector<NeEntry> equilibria;  // ascending vertex index
  std::uint64_t bound = 0;          // ne_upper_bound(K, S)
  std::uint64_t ties = 0;           // deviations with |utility change| <= tie tolerance
  bool sampled = false;             // true when produced by descent sampling, not enumeration
  std::uint64_t profiles_checked = 0;
};

// Scans all S^K profiles and returns every pure Nash equilibrium of the
// channel-selection game. A profile is kept iff no player can strictly
// improve its utility by more than tie_tolerance by switching channels.
// Throws CapExceeded if S^K > cap.
NeReport enumerate_cs_ne(const GainMatrix& gains, const GameConfig& cfg,
                         double tie_tolerance = 0.0,
                         std::uint64_t cap = kDefaultEnumerationCap);

// Best-response digraph of the channel-selection game with the potential
// evaluated at every vertex. Vertices are profile indices (see the codec);
// each vertex has exactly K*(S-1) unilateral neighbors, and the edge between
// neighbors i and j points toward the higher potential.
struct CsGraph {
  int num_players = 0;
  int num_channels = 0;
  std::vector<double> potentials;  // size S^K, indexed by vertex

  std::uint64_t num_vertices() const { return potentials.size(); }
  std::vector<std::uint64_t> neighbors(std::uint64_t v) const;
  bool is_sink(std::uint64_t v, double tie_tolerance = 0.0) const;
  std::vector<std::uint64_t> sinks(double tie_tolerance = 0.0) const;
  // Directed edges (from lower to higher potential); ties produce no edge.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> edges() const;
};

// Builds the full graph (potential per vertex). Throws CapExceeded if
// S^K > cap; the default cap keeps materialization below ~2^16 vertices.
CsGraph build_cs_graph(const GainMatrix& gains, const GameConfig& cfg,
                       std::uint64_t cap = kDefaultGraphCap);

// Sinks of the best-response digraph induced by an externally supplied
// potential table (size must be S^K). Vertex v is a sink iff no unilateral
// neighbor has potential exceeding potentials[v] + tie_tolerance.
std::vector<std::uint64_t> sinks_from_potentials(
    int num_players, int num_channels, const std::vector<double>& potentials,
    double tie_tolerance = 0.0);

// Plain-text export: one "index: (c_1,...,c_K) phi=<value>" line per vertex,
// then one "i j" line per directed edge.
void write_graph(const CsGraph& graph, std::ostream& out);

struct DescentResult {
  CsProfile profile;
  int sweeps = 0;
  bool converged = false;
};

// Round-robin strict-best-response descent from `start`: each player in turn
// switches to its best channel if that strictly improves its utility by more
// than tie_tolerance. Terminates at a sink of the best-response digraph
// (finite improvement property of the exact potential).
DescentResult br_descent_sink(const GainMatrix& gains, const GameConfig& cfg,
                              CsProfile start, double tie_tolerance = 0.0,
                              int max_sweeps = 10000);

// Uniformly random channel-selection profile.
CsProfile random_cs_profile(int num_players, int num_channels, RandomStream& rng);

}  // namespace pmac
