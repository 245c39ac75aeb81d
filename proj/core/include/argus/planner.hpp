#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "argus/apulse.hpp"
#include "argus/cost_graph.hpp"
#include "argus/risk.hpp"
#include "argus/terrain.hpp"

namespace argus {

// Weighted trade-off; alpha = 1 is pure min-time, alpha = 0 pure min-risk.
struct Balanced {
  double alpha = 0.5;
};
// Min-time subject to R_form <= max_risk on every path cell.
struct FastWithinRisk {
  double max_risk = 1.0;
};
// Min log-risk subject to total time <= budget_s.
struct SafeWithinTime {
  double budget_s = 0.0;
};

using MissionMode = std::variant<Balanced, FastWithinRisk, SafeWithinTime>;

std::string mode_name(const MissionMode& mode);

struct MissionRequest {
  Cell start;
  Cell goal;
  MissionMode mode = Balanced{};
  double formation_width_m = 0.0;
  double replan_slack = 0.25;

  // Parameter ranges only.
  void validate() const;
  // Also checks start/goal against the grid.
  void validate(const GridGeometry& geometry, const Raster<std::uint8_t>& obstacle) const;
};

struct ThreatApproach {
  std::string threat_id;
  double distance_m = 0.0;
  Cell closest_cell;
};

// Distance travelled per R_form band: < 0.15, [0.15, 0.5], > 0.5.
struct RiskExposure {
  double low_m = 0.0;
  double medium_m = 0.0;
  double high_m = 0.0;
};

struct PlanResult {
  std::vector<Cell> path;
  double total_time_s = 0.0;
  double total_distance_m = 0.0;
  double total_log_risk = 0.0;
  double survival_probability = 1.0;
  double max_cell_risk = 0.0;
  std::vector<ThreatApproach> closest_approach;
  RiskExposure exposure;
  std::map<int, double> terrain_composition_m;

  MissionRequest request;
  bool fallback_used = false;
  std::optional<double> effective_max_risk;
  bool anytime = false;
  SolverStats stats;
};

// Path KPIs from the graph's node risk layers. The start cell is never charged.
PlanResult compute_kpis(const CostGraph& graph, std::span<const ThreatSpec> threats, std::span<const NodeId> path);

std::vector<NodeId> to_nodes(const CostGraph& graph, std::span<const Cell> cells);
std::vector<Cell> to_cells(const CostGraph& graph, std::span<const NodeId> nodes);

// The graph must already carry the risk field for req.formation_width_m.
// `heuristics`, when given, must target the request goal.
PlanResult plan_balanced(const CostGraph& graph, std::span<const ThreatSpec> threats, const MissionRequest& req,
                         const HeuristicMaps* heuristics = nullptr);
PlanResult plan_fast_within_risk(const CostGraph& graph, std::span<const ThreatSpec> threats,
                                 const MissionRequest& req, const HeuristicMaps* heuristics = nullptr);
PlanResult plan_safe_within_time(const CostGraph& graph, std::span<const ThreatSpec> threats,
                                 const MissionRequest& req, const SolverConfig& config = {},
                                 const HeuristicMaps* heuristics = nullptr);
PlanResult plan(const CostGraph& graph, std::span<const ThreatSpec> threats, const MissionRequest& req,
                const SolverConfig& config = {}, const HeuristicMaps* heuristics = nullptr);

// Everything needed to plan against one terrain + threat picture.
struct Scenario {
  TerrainGrid grid;
  MobilityModel mobility;
  std::vector<ThreatSpec> threats;  // normalized
  CostGraph graph;                  // zero-risk topology

  static Scenario create(TerrainGrid grid, MobilityModel mobility, std::vector<ThreatSpec> threats);

  RiskField risk_field(double formation_width_m) const;
  CostGraph risk_graph(double formation_width_m) const;
};

PlanResult plan_mission(const Scenario& scenario, const MissionRequest& req, const SolverConfig& config = {});

}  // namespace argus
