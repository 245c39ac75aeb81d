#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "argus/apulse.hpp"
#include "argus/planner.hpp"
#include "argus/risk.hpp"

namespace argus {

struct DynamicEvent {
  std::vector<ThreatSpec> new_threats;
  std::size_t current_position_index = 0;
  double timestamp_s = 0.0;
};

// Post-event risk picture. The pre-event field and graph are left untouched;
// `graph` shares topology with the pre-event graph.
struct RiskOverlay {
  RiskField field;
  CostGraph graph;
  std::vector<ThreatSpec> threats;        // pre-event threats plus the new ones
  std::vector<std::uint8_t> region;       // cells inside the dilated new-threat union
  std::vector<std::uint8_t> changed;      // cells whose log-risk differs from before
  std::size_t recomputed_cells = 0;
  std::size_t recomputed_outside_region = 0;
};

// Incrementally folds new threats into `field`. Only cells within
// R + formation_width / 2 of a new threat's prior support are recomputed.
RiskOverlay apply_event(const CostGraph& graph, const RiskField& field, std::span<const ThreatSpec> threats,
                        const DynamicEvent& event);

// Patch budgets are a few minutes at most, so the patch solver runs with far
// fewer time buckets than a full solve.
inline constexpr int kPatchBucketTarget = 512;

inline SolverConfig patch_solver_defaults() {
  SolverConfig c;
  c.bucket_count_target = kPatchBucketTarget;
  return c;
}

struct RepairConfig {
  // Defaults to two cells.
  std::optional<double> safety_margin_m;
  // The margin grows by widen_factor per round and every round is solved;
  // the lowest-risk splice wins.
  double widen_factor = 2.0;
  int max_widenings = 3;
  SolverConfig patch_solver = patch_solver_defaults();
  SolverConfig full_solver;
};

struct PatchWindow {
  std::vector<NodeId> nodes;
  double radius_m = 0.0;
  std::size_t entry_index = 0;
  std::size_t exit_index = 0;
};

struct RepairOutcome {
  PlanResult plan;
  PatchWindow window;
  bool unchanged = false;
  bool window_widened = false;
  bool full_replan_used = false;
  double original_segment_time_s = 0.0;
  double segment_budget_s = 0.0;
  double repaired_segment_time_s = 0.0;
  double wall_time_s = 0.0;
  SolverStats stats;
};

// Repairs `original` against the post-event overlay by re-solving only the
// stretch of path affected by the new threats, inside a bounded window, with
// budget = original segment time + slack * (time of the first bracket).
RepairOutcome repair(const RiskOverlay& overlay, const PlanResult& original, const DynamicEvent& event,
                     double slack, const RepairConfig& config = {});

// Re-solves from the current position to the goal on the full post-event
// graph, with the same slackened budget the repair would get.
RepairOutcome full_replan(const RiskOverlay& overlay, const PlanResult& original, const DynamicEvent& event,
                          double slack, const RepairConfig& config = {});

struct KpiDelta {
  double pre = 0.0;
  double post = 0.0;
  double delta = 0.0;  // relative for risk/time, absolute for survival
};

struct ComparisonReport {
  KpiDelta log_risk;
  KpiDelta time_s;
  KpiDelta survival;
  RepairOutcome patch;
  RepairOutcome full;
  double patch_wall_s = 0.0;
  double full_wall_s = 0.0;
  // (patch risk - full risk) / max(full risk, tiny)
  double risk_gap = 0.0;
};

ComparisonReport compare_repair_vs_full(const RiskOverlay& overlay, const PlanResult& original,
                                        const DynamicEvent& event, double slack, const RepairConfig& config = {});

// Pre/post deltas of `original` (evaluated on the post-event field) vs `repaired`.
void fill_deltas(const RiskOverlay& overlay, const PlanResult& original, const PlanResult& repaired,
                 ComparisonReport& report);

}  // namespace argus
