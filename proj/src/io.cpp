#include "pmac/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace pmac {

std::string format_double(double value) {
  // Shortest %g representation that parses back to the same double; keeps
  // CSV output readable and bit-reproducible. All precisions are tried
  // because string length is not monotone in precision ("30" beats "3e+01").
  char buffer[40];
  std::string best;
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buffer, sizeof buffer, "%.*g", precision, value);
    if (std::strtod(buffer, nullptr) == value &&
        (best.empty() || std::strlen(buffer) < best.size()))
      best = buffer;
  }
  return best.empty() ? buffer : best;  // empty only for non-finite values
}

namespace {

std::vector<double> broadcast(const nlohmann::json& j, int count,
                              const char* what, bool split_scalar) {
  std::vector<double> values;
  if (j.is_number()) {
    const double v = j.get<double>();
    values.assign(count, split_scalar ? v / count : v);
  } else if (j.is_array()) {
    values = j.get<std::vector<double>>();
    if (static_cast<int>(values.size()) != count)
      throw std::invalid_argument(std::string("instance: ") + what +
                                  " array has the wrong length");
  } else {
    throw std::invalid_argument(std::string("instance: ") + what +
                                " must be a number or an array");
  }
  return values;
}

}  // namespace

Instance parse_instance(const nlohmann::json& j) {
  Instance instance;
  GameConfig& cfg = instance.config;
  cfg.num_players = j.at("K").get<int>();
  cfg.num_channels = j.at("S").get<int>();
  if (cfg.num_players < 1 || cfg.num_channels < 1)
    throw std::invalid_argument("instance: K and S must be >= 1");
  cfg.max_power = broadcast(j.at("p_max"), cfg.num_players, "p_max", false);
  cfg.noise_density = j.at("N0").get<double>();
  // A scalar B is the total bandwidth, split equally across channels.
  cfg.bandwidths = broadcast(j.at("B"), cfg.num_channels, "B", true);
  cfg.validate();

  GainMatrix& gains = instance.gains;
  gains.num_players = cfg.num_players;
  gains.num_channels = cfg.num_channels;
  const auto& rows = j.at("gains");
  if (!rows.is_array() || static_cast<int>(rows.size()) != cfg.num_players)
    throw std::invalid_argument("instance: gains must have K rows");
  for (const auto& row : rows) {
    if (!row.is_array() || static_cast<int>(row.size()) != cfg.num_channels)
      throw std::invalid_argument("instance: each gain row must have S entries");
    for (const auto& v : row) gains.values.push_back(v.get<double>());
  }
  gains.validate();
  return instance;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open instance file: " + path);
  nlohmann::json j;
  in >> j;
  return parse_instance(j);
}

nlohmann::json instance_to_json(const Instance& instance) {
  nlohmann::json j;
  j["K"] = instance.config.num_players;
  j["S"] = instance.config.num_channels;
  j["p_max"] = instance.config.max_power;
  j["N0"] = instance.config.noise_density;
  j["B"] = instance.config.bandwidths;
  nlohmann::json rows = nlohmann::json::array();
  for (int k = 0; k < instance.config.num_players; ++k) {
    nlohmann::json row = nlohmann::json::array();
    for (int s = 0; s < instance.config.num_channels; ++s)
      row.push_back(instance.gains.at(k, s));
    rows.push_back(row);
  }
  j["gains"] = rows;
  return j;
}

nlohmann::json power_profile_to_json(const PowerProfile& p) {
  nlohmann::json rows = nlohmann::json::array();
  for (int k = 0; k < p.num_players; ++k) {
    nlohmann::json row = nlohmann::json::array();
    for (int s = 0; s < p.num_channels; ++s) row.push_back(p.at(k, s));
    rows.push_back(row);
  }
  return rows;
}

PowerProfile power_profile_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty() || !j.front().is_array())
    throw std::invalid_argument("power profile: expected an array of rows");
  PowerProfile p;
  p.num_players = static_cast<int>(j.size());
  p.num_channels = static_cast<int>(j.front().size());
  for (const auto& row : j) {
    if (static_cast<int>(row.size()) != p.num_channels)
      throw std::invalid_argument("power profile: ragged rows");
    for (const auto& v : row) p.values.push_back(v.get<double>());
  }
  return p;
}

nlohmann::json pa_solution_to_json(const PaSolution& s) {
  nlohmann::json j;
  j["profile"] = power_profile_to_json(s.profile);
  j["rounds"] = s.rounds;
  j["residual"] = s.residual;
  j["converged"] = s.converged;
  j["inactive_players"] = s.inactive_players;
  return j;
}

nlohmann::json ne_report_to_json(const NeReport& r) {
  nlohmann::json j;
  j["count"] = r.equilibria.size();
  j["bound"] = r.bound;
  j["sampled"] = r.sampled;
  j["tie_count"] = r.ties;
  j["profiles_checked"] = r.profiles_checked;
  nlohmann::json list = nlohmann::json::array();
  for (const NeEntry& e : r.equilibria) {
    nlohmann::json entry;
    entry["choices"] = e.profile.choices;
    entry["potential"] = e.potential;
    entry["utilities"] = e.utilities;
    entry["nse"] = e.nse;
    entry["label"] = e.label;
    list.push_back(entry);
  }
  j["equilibria"] = list;
  return j;
}

nlohmann::json sic_report_to_json(const SicReport& r) {
  nlohmann::json j;
  j["rates"] = r.per_user_rates;
  j["sum_rate"] = r.sum_rate;
  j["order"] = r.order;
  j["residual"] = r.potential_identity_residual;
  j["sampled"] = r.sampled;
  return j;
}

void write_power_profile_csv(const PowerProfile& p, std::ostream& out) {
  for (int s = 0; s < p.num_channels; ++s) {
    if (s) out << ',';
    out << "ch_" << s + 1;
  }
  out << '\n';
  for (int k = 0; k < p.num_players; ++k) {
    for (int s = 0; s < p.num_channels; ++s) {
      if (s) out << ',';
      out << format_double(p.at(k, s));
    }
    out << '\n';
  }
}

void write_ne_report_csv(const NeReport& r, std::ostream& out) {
  const int K = r.equilibria.empty()
                    ? 0
                    : r.equilibria.front().profile.num_players();
  out << "index,choices,potential,nse";
  for (int k = 1; k <= K; ++k) out << ",u_" << k;
  out << '\n';
  for (std::size_t i = 0; i < r.equilibria.size(); ++i) {
    const NeEntry& e = r.equilibria[i];
    out << i << ',';
    for (int k = 0; k < e.profile.num_players(); ++k) {
      if (k) out << '-';
      out << e.profile.choices[k];
    }
    out << ',' << format_double(e.potential) << ',' << format_double(e.nse);
    for (double u : e.utilities) out << ',' << format_double(u);
    out << '\n';
  }
}

void write_table_csv(const Table& t, std::ostream& out) {
  for (std::size_t i = 0; i < t.header.size(); ++i) {
    if (i) out << ',';
    out << t.header[i];
  }
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << row[i];
    }
    out << '\n';
  }
}

void write_table_json(const Table& t, std::ostream& out) {
  nlohmann::json j;
  j["columns"] = t.header;
  j["rows"] = t.rows;
  out << j.dump(2) << '\n';
}

}  // namespace pmac
