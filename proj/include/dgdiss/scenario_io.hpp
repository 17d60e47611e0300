#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dgdiss/simulate.hpp"

namespace dgdiss {

inline constexpr const char* kCodeVersion = "1.0.0";

/// Schema error; what() lists every offending key, one per line.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::vector<std::string>& problems);
    const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

/// Scenario JSON. Keys mirror ScenarioConfig; `lambda` is {"mode": "factor" |
/// "absolute", "value": x}; `initial` is {"name": ..., <numeric params>};
/// cells_per_axis / box_length accept a scalar (broadcast) or one value per axis.
ScenarioConfig parse_config(const nlohmann::json& doc);
ScenarioConfig load_config(const std::string& path);
nlohmann::json config_to_json(const ScenarioConfig& config);

inline const std::vector<std::string>& ledger_columns() {
    static const std::vector<std::string> cols{"t",          "kinetic_energy", "dKdt",         "a_total",
                                               "a_phy_sigma", "a_num_sigma",   "a_phy_broken", "a_num_broken",
                                               "convective_rate", "eps_tot"};
    return cols;
}

nlohmann::json ledger_metadata(const ScenarioConfig& config, const ResolvedPenalty& penalty);
/// "# <metadata json>" line followed by the column header.
void write_ledger_header(std::ostream& os, const nlohmann::json& metadata);
void write_ledger_row(std::ostream& os, const DissipationSample& row);

struct Ledger {
    nlohmann::json metadata;
    std::vector<DissipationSample> rows;
};
Ledger read_ledger(std::istream& is);

}  // namespace dgdiss
