#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "argus/apulse.hpp"
#include "argus/planner.hpp"

namespace argus::bench {

struct InstanceOptions {
  int rows = 32;
  int cols = 32;
  int n_threats = 4;
  std::uint64_t seed = 1;
  double cell_size = 25.0;
  double formation_width_m = 0.0;
  double obstacle_fraction = 0.03;
  std::vector<double> slack_grid{0.1, 0.2, 0.5};
};

// Seeded random terrain + threats with start and goal at opposite corners.
struct BenchInstance {
  InstanceOptions options;
  Scenario scenario;
  CostGraph graph;  // carries the risk field
  NodeId start = kNoNode;
  NodeId goal = kNoNode;
  double t_min = 0.0;

  double budget(double slack) const { return (1.0 + slack) * t_min; }
  // Stable digest of the generated inputs.
  std::uint64_t hash() const;
};

BenchInstance generate_instance(const InstanceOptions& options);
BenchInstance generate_instance(int rows, int cols, int n_threats, std::uint64_t seed);

// Wraps an existing graph as an instance (start/goal given).
BenchInstance make_instance(Scenario scenario, double formation_width_m, Cell start, Cell goal);

struct OracleResult {
  double log_risk = 0.0;
  double time_s = 0.0;
  std::vector<NodeId> path;
  std::uint64_t paths_visited = 0;
};

// Exhaustive simple-path search with branch-and-bound on time. Ties in risk
// (relative 1e-12) go to the faster path. Returns nullopt when no path fits
// the budget. Refuses graphs larger than `max_nodes`.
std::optional<OracleResult> oracle_optimal(const CostGraph& graph, NodeId start, NodeId goal, double budget_s,
                                           std::size_t max_nodes = 30);

// Calls `visit` for every simple start->goal path; stops early if it returns false.
void for_each_simple_path(const CostGraph& graph, NodeId start, NodeId goal,
                          const std::function<bool(const std::vector<NodeId>&)>& visit, std::size_t max_nodes = 30);

// Exact label-correcting RCSPP with full Pareto label sets per node and
// time-feasibility pruning only. Used as the classical reference.
struct BaselineResult {
  std::vector<NodeId> path;
  double log_risk = 0.0;
  double time_s = 0.0;
  bool timed_out = false;
  std::uint64_t labels_created = 0;
  std::uint64_t labels_expanded = 0;
  double wall_time_s = 0.0;
};

BaselineResult solve_label_correcting(const CostGraph& graph, NodeId start, NodeId goal, double budget_s,
                                      double timeout_s);

struct SweepOptions {
  std::vector<int> sizes{32, 64};
  std::vector<double> alphas{0.1, 0.2, 0.5};
  std::vector<std::uint64_t> seeds{1};
  double timeout_s = 600.0;
  std::size_t oracle_max_nodes = 25;
  // One threat per threat_spacing^2 cells, at least two.
  int threat_spacing = 20;
  bool run_baseline = true;
  int workers = 1;
  SolverConfig solver;
};

struct SweepRow {
  int rows = 0;
  int cols = 0;
  std::uint64_t seed = 0;
  double alpha = 0.0;
  std::string solver;
  double t_min_s = 0.0;
  double budget_s = 0.0;
  double wall_s = 0.0;
  std::uint64_t expansions = 0;
  std::uint64_t pruned_feasibility = 0;
  std::uint64_t pruned_optimality = 0;
  std::uint64_t pruned_dominance = 0;
  double log_risk = 0.0;
  double time_s = 0.0;
  bool timed_out = false;
  bool budget_ok = true;
  std::string reference;  // "oracle", "label-correcting" or empty
  std::optional<double> reference_risk;
  std::optional<double> gap;  // relative risk deviation from the reference
};

struct SweepReport {
  std::vector<SweepRow> rows;
  std::string baseline_name = "label-correcting (full Pareto labels, time-feasibility pruning)";

  std::string to_csv() const;
  std::string runtime_table() const;
  std::string optimality_table() const;
};

SweepReport run_sweep(const SweepOptions& options);

}  // namespace argus::bench
