#include "pmac/enumerate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "pmac/errors.hpp"

namespace pmac {

namespace {

constexpr std::uint64_t kLoadRefreshPeriod = 1u << 16;  // drift control

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

namespace {

// S^K saturated at UINT64_MAX (for diagnostics when the cap is exceeded).
std::uint64_t saturating_pow(int base, int exponent) {
  unsigned __int128 value = 1;
  for (int i = 0; i < exponent; ++i) {
    value *= static_cast<unsigned>(base);
    if (value > std::numeric_limits<std::uint64_t>::max())
      return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(value);
}

}  // namespace

std::uint64_t checked_profile_count(int num_players, int num_channels,
                                    std::uint64_t cap) {
  require(num_players >= 1 && num_channels >= 1, "profile count: empty game");
  const std::uint64_t radix = static_cast<std::uint64_t>(num_channels);
  std::uint64_t count = 1;
  for (int k = 0; k < num_players; ++k) {
    if (count > cap / radix)
      throw CapExceeded(saturating_pow(num_channels, num_players), cap);
    count *= radix;
    if (count > cap)
      throw CapExceeded(saturating_pow(num_channels, num_players), cap);
  }
  return count;
}

std::uint64_t encode_profile(const CsProfile& profile, int num_channels) {
  require(num_channels >= 1, "encode: need at least one channel");
  std::uint64_t index = 0;
  std::uint64_t radix = 1;
  for (int k = 0; k < profile.num_players(); ++k) {
    const int c = profile.choices[k];
    require(c >= 1 && c <= num_channels, "encode: channel choice out of range");
    index += radix * static_cast<std::uint64_t>(c - 1);
    radix *= static_cast<std::uint64_t>(num_channels);
  }
  return index;
}

CsProfile decode_profile(std::uint64_t index, int num_players,
                         int num_channels) {
  require(num_players >= 1 && num_channels >= 1, "decode: empty game");
  CsProfile profile;
  profile.choices.resize(num_players);
  for (int k = 0; k < num_players; ++k) {
    profile.choices[k] = static_cast<int>(index % num_channels) + 1;
    index /= static_cast<std::uint64_t>(num_channels);
  }
  require(index == 0, "decode: index out of range");
  return profile;
}

int profile_distance(const CsProfile& a, const CsProfile& b) {
  require(a.num_players() == b.num_players(), "distance: length mismatch");
  int distance = 0;
  for (int k = 0; k < a.num_players(); ++k)
    if (a.choices[k] != b.choices[k]) ++distance;
  return distance;
}

std::uint64_t ne_upper_bound(int num_players, int num_channels) {
  require(num_players >= 1 && num_channels >= 1, "bound: empty game");
  // 1 + (S-1) * (number of nonempty even-sized player subsets); the subset
  // count is sum_{even i >= 2} C(K, i) = 2^(K-1) - 1.
  if (num_players > 62 && num_channels > 1)
    return std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t even_subsets =
      (std::uint64_t{1} << (num_players - 1)) - 1;
  const unsigned __int128 bound =
      1 + static_cast<unsigned __int128>(num_channels - 1) * even_subsets;
  if (bound > std::numeric_limits<std::uint64_t>::max())
    return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(bound);
}

double ne_fraction_estimate(int num_players, int num_channels) {
  require(num_players >= 1 && num_channels >= 2, "fraction estimate: S >= 2");
  return (num_channels - 1) *
         std::pow(2.0 / num_channels, static_cast<double>(num_players));
}

namespace {

// Shared scan state: per-channel aggregate received power ("load") under the
// current profile, updated in O(1) per mixed-radix increment.
struct ProfileScanner {
  const GainMatrix& gains;
  const GameConfig& cfg;
  int K, S;
  std::vector<double> weights;   // band fractions
  std::vector<double> noise;     // per-channel noise power
  std::vector<double> own;       // own[k*S+s] = p_max_k * g_ks
  std::vector<int> digits;       // current profile, 0-based channels
  std::vector<double> load;      // per-channel sum of own terms

  ProfileScanner(const GainMatrix& g, const GameConfig& c)
      : gains(g), cfg(c), K(c.num_players), S(c.num_channels) {
    weights.resize(S);
    noise.resize(S);
    for (int s = 0; s < S; ++s) {
      weights[s] = cfg.band_fraction(s);
      noise[s] = cfg.noise_power(s);
    }
    own.resize(static_cast<std::size_t>(K) * S);
    for (int k = 0; k < K; ++k)
      for (int s = 0; s < S; ++s)
        own[static_cast<std::size_t>(k) * S + s] =
            cfg.max_power[k] * gains.at(k, s);
    digits.assign(K, 0);
    refresh_loads();
  }

  double own_at(int k, int s) const {
    return own[static_cast<std::size_t>(k) * S + s];
  }

  void refresh_loads() {
    load.assign(S, 0.0);
    for (int k = 0; k < K; ++k) load[digits[k]] += own_at(k, digits[k]);
  }

  // Utility of player k if it moved to channel s (everyone else fixed).
  // When s is the current channel this is the current utility.
  double utility_on(int k, int s) const {
    double interference = noise[s] + load[s];
    if (digits[k] == s) interference -= own_at(k, s);
    if (interference < noise[s]) interference = noise[s];  // fp guard
    return weights[s] * std::log2(1.0 + own_at(k, s) / interference);
  }

  // Advances to the next profile in little-endian mixed-radix order,
  // updating loads incrementally. Returns false after the last profile.
  bool advance() {
    for (int k = 0; k < K; ++k) {
      load[digits[k]] -= own_at(k, digits[k]);
      if (digits[k] + 1 < S) {
        digits[k] += 1;
        load[digits[k]] += own_at(k, digits[k]);
        return true;
      }
      digits[k] = 0;
      load[0] += own_at(k, 0);
    }
    return false;
  }

  CsProfile current_profile() const {
    CsProfile p;
    p.choices.resize(K);
    for (int k = 0; k < K; ++k) p.choices[k] = digits[k] + 1;
    return p;
  }
};

}  // namespace

NeReport enumerate_cs_ne(const GainMatrix& gains, const GameConfig& cfg,
                         double tie_tolerance, std::uint64_t cap) {
  cfg.validate();
  gains.validate();
  validate_dimensions(cfg, gains);
  require(tie_tolerance >= 0.0, "enumerate: tie tolerance must be >= 0");

  const std::uint64_t total =
      checked_profile_count(cfg.num_players, cfg.num_channels, cap);

  NeReport report;
  report.bound = ne_upper_bound(cfg.num_players, cfg.num_channels);
  report.profiles_checked = total;

  ProfileScanner scan(gains, cfg);
  for (std::uint64_t index = 0;; ++index) {
    if (index != 0 && index % kLoadRefreshPeriod == 0) scan.refresh_loads();

    bool is_ne = true;
    for (int k = 0; k < scan.K; ++k) {
      const double current = scan.utility_on(k, scan.digits[k]);
      for (int s = 0; s < scan.S; ++s) {
        if (s == scan.digits[k]) continue;
        const double diff = scan.utility_on(k, s) - current;
        if (std::abs(diff) <= tie_tolerance) ++report.ties;
        if (diff > tie_tolerance) is_ne = false;
      }
    }
    if (is_ne) {
      NeEntry entry;
      entry.profile = scan.current_profile();
      const PowerProfile p = cs_to_power(entry.profile, cfg);
      entry.potential = potential(p, gains, cfg);
      entry.utilities.resize(cfg.num_players);
      entry.nse = 0.0;
      for (int k = 0; k < cfg.num_players; ++k) {
        entry.utilities[k] = utility(p, gains, cfg, k);
        entry.nse += entry.utilities[k];
      }
      entry.label = "ne";
      report.equilibria.push_back(std::move(entry));
    }
    if (index + 1 == total) break;
    scan.advance();
  }
  return report;
}

std::vector<std::uint64_t> CsGraph::neighbors(std::uint64_t v) const {
  std::vector<std::uint64_t> result;
  result.reserve(static_cast<std::size_t>(num_players) * (num_channels - 1));
  std::int64_t radix = 1;
  std::uint64_t rest = v;
  for (int k = 0; k < num_players; ++k) {
    const int digit = static_cast<int>(rest % num_channels);
    for (int s = 0; s < num_channels; ++s)
      if (s != digit)
        result.push_back(static_cast<std::uint64_t>(
            static_cast<std::int64_t>(v) + (s - digit) * radix));
    radix *= num_channels;
    rest /= static_cast<std::uint64_t>(num_channels);
  }
  return result;
}

bool CsGraph::is_sink(std::uint64_t v, double tie_tolerance) const {
  for (std::uint64_t u : neighbors(v))
    if (potentials[u] > potentials[v] + tie_tolerance) return false;
  return true;
}

std::vector<std::uint64_t> CsGraph::sinks(double tie_tolerance) const {
  std::vector<std::uint64_t> result;
  for (std::uint64_t v = 0; v < num_vertices(); ++v)
    if (is_sink(v, tie_tolerance)) result.push_back(v);
  return result;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> CsGraph::edges() const {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> result;
  for (std::uint64_t v = 0; v < num_vertices(); ++v)
    for (std::uint64_t u : neighbors(v))
      if (potentials[u] > potentials[v]) result.emplace_back(v, u);
  return result;
}

CsGraph build_cs_graph(const GainMatrix& gains, const GameConfig& cfg,
                       std::uint64_t cap) {
  cfg.validate();
  gains.validate();
  validate_dimensions(cfg, gains);

  const std::uint64_t total =
      checked_profile_count(cfg.num_players, cfg.num_channels, cap);

  CsGraph graph;
  graph.num_players = cfg.num_players;
  graph.num_channels = cfg.num_channels;
  graph.potentials.resize(total);

  ProfileScanner scan(gains, cfg);
  for (std::uint64_t index = 0;; ++index) {
    if (index != 0 && index % kLoadRefreshPeriod == 0) scan.refresh_loads();
    double phi = 0.0;
    for (int s = 0; s < scan.S; ++s)
      phi += scan.weights[s] * std::log2(scan.noise[s] + scan.load[s]);
    graph.potentials[index] = phi;
    if (index + 1 == total) break;
    scan.advance();
  }
  return graph;
}

std::vector<std::uint64_t> sinks_from_potentials(
    int num_players, int num_channels, const std::vector<double>& potentials,
    double tie_tolerance) {
  CsGraph graph;
  graph.num_players = num_players;
  graph.num_channels = num_channels;
  const std::uint64_t total = checked_profile_count(
      num_players, num_channels, std::numeric_limits<std::uint64_t>::max());
  require(potentials.size() == total, "sinks: potential table size mismatch");
  graph.potentials = potentials;
  return graph.sinks(tie_tolerance);
}

void write_graph(const CsGraph& graph, std::ostream& out) {
  char buffer[64];
  for (std::uint64_t v = 0; v < graph.num_vertices(); ++v) {
    const CsProfile p = decode_profile(v, graph.num_players, graph.num_channels);
    out << v << ": (";
    for (int k = 0; k < graph.num_players; ++k) {
      if (k) out << ',';
      out << p.choices[k];
    }
    std::snprintf(buffer, sizeof buffer, "%.17g", graph.potentials[v]);
    out << ") phi=" << buffer << '\n';
  }
  for (const auto& [from, to] : graph.edges()) out << from << ' ' << to << '\n';
}

DescentResult br_descent_sink(const GainMatrix& gains, const GameConfig& cfg,
                              CsProfile start, double tie_tolerance,
                              int max_sweeps) {
  cfg.validate();
  gains.validate();
  validate_dimensions(cfg, gains);
  require(start.num_players() == cfg.num_players, "descent: start profile size");
  for (int c : start.choices)
    require(c >= 1 && c <= cfg.num_channels, "descent: start choice out of range");

  ProfileScanner scan(gains, cfg);
  for (int k = 0; k < scan.K; ++k) scan.digits[k] = start.choices[k] - 1;
  scan.refresh_loads();

  DescentResult result;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool moved = false;
    for (int k = 0; k < scan.K; ++k) {
      const int current = scan.digits[k];
      double best_value = scan.utility_on(k, current);
      int best_channel = current;
      for (int s = 0; s < scan.S; ++s) {
        if (s == current) continue;
        const double value = scan.utility_on(k, s);
        if (value > best_value + tie_tolerance) {
          best_value = value;
          best_channel = s;
        }
      }
      if (best_channel != current) {
        scan.load[current] -= scan.own_at(k, current);
        scan.digits[k] = best_channel;
        scan.load[best_channel] += scan.own_at(k, best_channel);
        moved = true;
      }
    }
    result.sweeps = sweep + 1;
    if (!moved) {
      result.converged = true;
      break;
    }
  }
  result.profile = scan.current_profile();
  return result;
}

CsProfile random_cs_profile(int num_players, int num_channels,
                            RandomStream& rng) {
  CsProfile p;
  p.choices.resize(num_players);
  for (int k = 0; k < num_players; ++k)
    p.choices[k] =
        static_cast<int>(rng.next_below(static_cast<std::uint64_t>(num_channels))) + 1;
  return p;
}

}  // namespace pmac
