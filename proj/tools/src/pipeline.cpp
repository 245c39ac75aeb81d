#include "argus/tools/pipeline.hpp"

#include <algorithm>

#include "argus/errors.hpp"
#include "argus/io.hpp"

namespace argus::tools {

ErrorInfo classify(std::exception_ptr error) {
  ErrorInfo info;
  try {
    std::rethrow_exception(error);
  } catch (const NotFoundError& e) {
    info = {Failure::kNotFound, e.what(), json::object()};
  } catch (const InfeasibleBudgetError& e) {
    info = {Failure::kInfeasible, e.what(), json{{"T_min_s", e.min_time_s()}, {"budget_s", e.budget_s()}}};
  } catch (const NoPathError& e) {
    info = {Failure::kInfeasible, e.what(), json::object()};
  } catch (const EmptyGraphError& e) {
    info = {Failure::kInfeasible, e.what(), json::object()};
  } catch (const ResourceExhaustedError& e) {
    info = {Failure::kTimeout, e.what(), json::object()};
  } catch (const ValidationError& e) {
    info = {Failure::kValidation, e.what(), json{{"field", e.field()}}};
  } catch (const ParseError& e) {
    info = {Failure::kValidation, e.what(), json{{"where", e.where()}}};
  } catch (const Error& e) {
    info = {Failure::kValidation, e.what(), json::object()};
  } catch (const nlohmann::json::exception& e) {
    info = {Failure::kValidation, e.what(), json::object()};
  } catch (const std::exception& e) {
    info = {Failure::kInternal, e.what(), json::object()};
  } catch (...) {
    info = {Failure::kInternal, "unknown error", json::object()};
  }
  return info;
}

int exit_code(Failure kind) {
  switch (kind) {
    case Failure::kValidation:
    case Failure::kNotFound:
      return 2;
    case Failure::kInfeasible:
      return 3;
    case Failure::kTimeout:
      return 4;
    case Failure::kInternal:
      break;
  }
  return 1;
}

int http_status(Failure kind) {
  switch (kind) {
    case Failure::kValidation:
      return 400;
    case Failure::kNotFound:
      return 404;
    case Failure::kInfeasible:
      return 409;
    case Failure::kTimeout:
      return 503;
    case Failure::kInternal:
      break;
  }
  return 500;
}

const char* failure_name(Failure kind) {
  switch (kind) {
    case Failure::kValidation:
      return "validation";
    case Failure::kNotFound:
      return "not_found";
    case Failure::kInfeasible:
      return "infeasible";
    case Failure::kTimeout:
      return "timeout";
    case Failure::kInternal:
      break;
  }
  return "internal";
}

json error_body(const ErrorInfo& info) {
  json j{{"error", failure_name(info.kind)}, {"status", http_status(info.kind)}, {"message", info.message}};
  for (const auto& [k, v] : info.detail.items()) j[k] = v;
  return j;
}

Scenario scenario_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("scenario", "expected an object");
  if (!j.contains("terrain")) throw ValidationError("terrain", "missing");
  TerrainGrid grid = io::terrain_from_json(j["terrain"]);
  MobilityModel mobility = j.contains("mobility") ? io::mobility_from_json(j["mobility"]) : MobilityModel::defaults();
  std::vector<ThreatSpec> threats;
  if (j.contains("threats")) threats = io::threats_from_json(j["threats"]);
  return Scenario::create(std::move(grid), std::move(mobility), std::move(threats));
}

json scenario_to_json(const Scenario& s) {
  return json{{"terrain", io::to_json(s.grid)},
              {"mobility", io::to_json(s.mobility)},
              {"threats", io::threats_to_json(s.threats)}};
}

PlanResult run_plan(const Scenario& scenario, const MissionRequest& request, const SolverConfig& config) {
  return plan_mission(scenario, request, config);
}

ComparisonReport run_patch(const Scenario& scenario, const PlanResult& original, const DynamicEvent& event,
                           const SolverConfig& config) {
  const double width = original.request.formation_width_m;
  const RiskField field = scenario.risk_field(width);
  const CostGraph graph = apply_risk(scenario.graph, field);
  const RiskOverlay overlay = apply_event(graph, field, scenario.threats, event);
  RepairConfig rc;
  rc.patch_solver = config;
  rc.patch_solver.bucket_count_target = std::min(config.bucket_count_target, kPatchBucketTarget);
  rc.full_solver = config;
  return compare_repair_vs_full(overlay, original, event, original.request.replan_slack, rc);
}

json patch_output(const ComparisonReport& report) {
  return json{{"result", io::result_to_json(report.patch.plan)}, {"report", io::report_to_json(report)}};
}

json riskfield_output(const Scenario& scenario, double formation_width_m) {
  json j = io::risk_field_to_json(scenario.risk_field(formation_width_m));
  j["land_cover"] = scenario.grid.land_cover.data();
  j["elevation"] = scenario.grid.elevation.data();
  return j;
}

}  // namespace argus::tools
