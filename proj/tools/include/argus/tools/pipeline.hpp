#pragma once

#include <exception>
#include <string>

#include <nlohmann/json.hpp>

#include "argus/errors.hpp"
#include "argus/planner.hpp"
#include "argus/replan.hpp"

namespace argus::tools {

using json = nlohmann::json;

// Unknown scenario or plan id.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

enum class Failure { kValidation, kNotFound, kInfeasible, kTimeout, kInternal };

struct ErrorInfo {
  Failure kind = Failure::kInternal;
  std::string message;
  json detail = json::object();  // e.g. T_min_s for an infeasible budget
};

ErrorInfo classify(std::exception_ptr error);
int exit_code(Failure kind);
int http_status(Failure kind);
const char* failure_name(Failure kind);
// {"error", "status", "message", ...detail}
json error_body(const ErrorInfo& info);

// Scenario document: {"terrain": {...}, "threats": [...], "mobility": {...}?}.
Scenario scenario_from_json(const json& j);
json scenario_to_json(const Scenario& scenario);

PlanResult run_plan(const Scenario& scenario, const MissionRequest& request, const SolverConfig& config);

// Applies `event` to the field the original plan was made on, then repairs
// and fully replans for comparison. The patch result is report.patch.plan.
ComparisonReport run_patch(const Scenario& scenario, const PlanResult& original, const DynamicEvent& event,
                           const SolverConfig& config);
// {"result": repaired plan, "report": comparison}
json patch_output(const ComparisonReport& report);

// Risk rasters plus land cover and elevation for map overlays.
json riskfield_output(const Scenario& scenario, double formation_width_m);

}  // namespace argus::tools
