#pragma once

// Scenario files are JSON documents; see docs/scenario_schema.md.

#include "ppc/sim_engine.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace ppc {

using Json = nlohmann::ordered_json;

/// Parses a scenario document. Missing fields take their documented defaults.
/// Throws ConfigError listing every violation with its field path.
Scenario scenario_from_json(const Json& doc);

/// Canonical form: every field explicit, plant inline.
Json scenario_to_json(const Scenario& sc);

/// Applies `key=value` with a dotted path (`controller.gains[1]=4`). The value
/// is read as JSON when it parses, otherwise as a string.
void apply_override(Json& doc, const std::string& assignment);

/// Reads the file, applies the overrides in order, then parses.
Scenario load_scenario(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

Json read_json_file(const std::filesystem::path& path);

bool operator==(const PlantModel& a, const PlantModel& b);
bool operator==(const ControllerConfig& a, const ControllerConfig& b);
bool operator==(const Scenario& a, const Scenario& b);

/// One sweep axis: `key=v1,v2,...`.
struct GridAxis {
    std::string key;
    std::vector<Json> values;
};

/// Throws ConfigError on an empty grid or an axis without values.
std::vector<GridAxis> parse_grid(const std::vector<std::string>& specs);

/// Row-major cartesian product; the last axis varies fastest.
std::vector<std::vector<Json>> grid_points(const std::vector<GridAxis>& axes);

Json metrics_to_json(const Metrics& m);

/// Summary written next to a trace: status, metrics, the canonical scenario and the overrides.
Json run_summary(const Scenario& sc, const RunResult& res, const std::vector<std::string>& overrides);

Json comparison_to_json(const Comparison& c);

}  // namespace ppc
