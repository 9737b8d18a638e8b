// JSON/CSV interchange: instance files, solution/report serialization, and
// deterministic number formatting (shortest round-trip decimal) so identical
// runs produce bit-identical output.
#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "pmac/enumerate.hpp"
#include "pmac/model.hpp"
#include "pmac/sic.hpp"
#include "pmac/waterfill.hpp"

#include "json.hpp"

namespace pmac {

// Shortest decimal that round-trips the double exactly ("%.17g" trimmed by
// printf's %g semantics); used for every number in CSV output.
std::string format_double(double value);

// Instance files: {"K":int, "S":int, "p_max":[...]|number, "N0":number,
// "B":[...]|number, "gains":[[...], ...]}. Scalars broadcast.
struct Instance {
  GameConfig config;
  GainMatrix gains;
};

Instance parse_instance(const nlohmann::json& j);
Instance load_instance(const std::string& path);
nlohmann::json instance_to_json(const Instance& instance);

nlohmann::json power_profile_to_json(const PowerProfile& p);
PowerProfile power_profile_from_json(const nlohmann::json& j);

nlohmann::json pa_solution_to_json(const PaSolution& s);
nlohmann::json ne_report_to_json(const NeReport& r);
nlohmann::json sic_report_to_json(const SicReport& r);

// CSV rendering of a power profile: header ch_1..ch_S, one row per player.
void write_power_profile_csv(const PowerProfile& p, std::ostream& out);

// CSV rendering of an NE report: header
// index,choices,potential,nse,u_1..u_K (choices joined with '-').
void write_ne_report_csv(const NeReport& r, std::ostream& out);

// Generic string table with CSV/JSON writers (used by the experiment
// harness; all numbers already formatted deterministically).
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

void write_table_csv(const Table& t, std::ostream& out);
void write_table_json(const Table& t, std::ostream& out);

}  // namespace pmac
