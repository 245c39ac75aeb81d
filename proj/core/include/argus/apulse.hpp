#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <optional>
#include <vector>

#include "argus/cost_graph.hpp"

namespace argus {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Absolute slack on time-budget comparisons, seconds.
inline constexpr double kBudgetTolerance = 1e-9;

// Exact reverse shortest-path distances to the goal under each single cost.
// Unreachable nodes hold +inf.
struct HeuristicMaps {
  NodeId goal = kNoNode;
  std::vector<double> time_to_goal;
  std::vector<double> risk_to_goal;
};

HeuristicMaps precompute_heuristics(const CostGraph& graph, NodeId goal);

// Reverse Dijkstra from `goal` under arc time (into goal) only.
std::vector<double> reverse_min_time(const CostGraph& graph, NodeId goal);
// Reverse Dijkstra from `goal` charging l(v) of each arc's head.
std::vector<double> reverse_min_risk(const CostGraph& graph, NodeId goal);

enum class DominanceRule : std::uint8_t {
  kTimeBucket,  // one label per (node, floor(time / bucket_width))
  kExactTime,   // one label per (node, exact accumulated time); partial paths stay simple
};

struct SolverConfig {
  int bucket_count_target = 8192;
  double timeout_s = 600.0;
  std::optional<std::uint64_t> node_expansion_limit;
  // Overrides the auto-tuned bucket width when set.
  std::optional<double> bucket_width_s;
  // Seed the incumbent with the min-time path when it fits the budget.
  bool seed_incumbent = true;
  bool use_risk_heuristic = true;
  bool prune_feasibility = true;
  bool prune_optimality = true;
  DominanceRule dominance = DominanceRule::kTimeBucket;
  // Reject labels whose last `ascent_window` moves are all ascents summing to
  // more than `ascent_threshold`.
  bool limit_cumulative_ascent = false;
  int ascent_window = 4;
  double ascent_threshold = 0.6;

  void validate() const;
};

double auto_bucket_width(double budget_s, const SolverConfig& config);

struct SolverStats {
  std::uint64_t labels_pushed = 0;
  std::uint64_t labels_popped = 0;
  std::uint64_t labels_expanded = 0;
  std::uint64_t pruned_feasibility = 0;
  std::uint64_t pruned_optimality = 0;
  std::uint64_t pruned_dominance = 0;
  std::uint64_t pruned_ascent = 0;
  std::uint64_t bucket_entries = 0;
  std::uint64_t incumbent_updates = 0;
  double bucket_width_s = 0.0;
  double wall_time_s = 0.0;
  bool limit_hit = false;
};

struct SolveResult {
  std::vector<NodeId> path;
  // Totals are recomputed from the graph along `path`, not from buckets.
  double total_time_s = 0.0;
  double total_log_risk = 0.0;
  bool anytime = false;
  std::vector<double> incumbent_history;
  SolverStats stats;
};

// Minimum log-risk path from start to goal with total time <= budget_s.
// Throws InfeasibleBudgetError when budget_s < T_min, ResourceExhaustedError
// when a limit is hit before any feasible path is known.
SolveResult solve(const CostGraph& graph, NodeId start, NodeId goal, double budget_s,
                  const SolverConfig& config = {}, const HeuristicMaps* heuristics = nullptr);

// Removes cycles from a walk; never increases time or log-risk.
std::vector<NodeId> erase_loops(std::span<const NodeId> walk);

}  // namespace argus
