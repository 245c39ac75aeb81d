#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "argus/planner.hpp"
#include "argus/replan.hpp"
#include "argus/risk.hpp"
#include "argus/terrain.hpp"

namespace argus::io {

using json = nlohmann::json;

// Reads and parses a JSON file; syntax errors become ParseError naming the line.
json read_json_file(const std::filesystem::path& path);
json parse_json(std::string_view text, const std::string& source = "<input>");
void write_text_file(const std::filesystem::path& path, std::string_view text);

// Canonical serialization used for every file and HTTP body: two-space
// indent, trailing newline.
std::string dump(const json& j);

TerrainGrid terrain_from_json(const json& j);
json to_json(const TerrainGrid& grid);
TerrainGrid load_grid(const std::filesystem::path& path);

MobilityModel mobility_from_json(const json& j);
json to_json(const MobilityModel& mobility);
MobilityModel load_mobility(const std::filesystem::path& path);

ThreatSpec threat_from_json(const json& j, const std::string& where);
std::vector<ThreatSpec> threats_from_json(const json& j);
json to_json(const ThreatSpec& threat);
json threats_to_json(std::span<const ThreatSpec> threats);
std::vector<ThreatSpec> load_threats(const std::filesystem::path& path);

MissionRequest mission_from_json(const json& j);
json to_json(const MissionRequest& req);
MissionRequest load_mission(const std::filesystem::path& path);

json to_json(const SolverStats& stats, bool include_timings);

// Wall-clock fields are omitted unless `include_timings`, so identical inputs
// give byte-identical output.
json result_to_json(const PlanResult& result, bool include_timings = false);
PlanResult result_from_json(const json& j);
void save_result(const std::filesystem::path& path, const PlanResult& result, bool include_timings = false);
PlanResult load_result(const std::filesystem::path& path);

DynamicEvent event_from_json(const json& j);
json to_json(const DynamicEvent& event);
DynamicEvent load_event(const std::filesystem::path& path);

json raster_to_json(const Raster<double>& raster);
json risk_field_to_json(const RiskField& field);

json report_to_json(const ComparisonReport& report, bool include_timings = false);

// Per-cell series along a plan for profile charts.
json profile_to_json(const CostGraph& graph, const PlanResult& result);

}  // namespace argus::io
