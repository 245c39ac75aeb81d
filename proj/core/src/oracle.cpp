#include <cmath>
#include <string>

#include "argus/bench.hpp"
#include "argus/errors.hpp"

namespace argus::bench {
namespace {

void check_size(const CostGraph& graph, std::size_t max_nodes) {
  if (graph.node_count() > max_nodes) {
    throw DomainError("exhaustive search refused: " + std::to_string(graph.node_count()) + " nodes > " +
                      std::to_string(max_nodes));
  }
}

// Bellman-Ford over reverse arcs; deliberately simple.
std::vector<double> time_lower_bound(const CostGraph& graph, NodeId goal) {
  const auto n = graph.node_count();
  std::vector<double> lb(n, kInfinity);
  lb[static_cast<std::size_t>(goal)] = 0.0;
  for (std::size_t round = 0; round < n; ++round) {
    bool changed = false;
    for (std::size_t u = 0; u < n; ++u) {
      for (const Arc& a : graph.arcs(static_cast<NodeId>(u))) {
        const double via = a.time + lb[static_cast<std::size_t>(a.to)];
        if (via < lb[u]) {
          lb[u] = via;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  return lb;
}

struct Search {
  const CostGraph& graph;
  NodeId goal;
  double budget;
  std::vector<double> lb;
  std::vector<char> on_path;
  std::vector<NodeId> path;
  OracleResult best;
  bool found = false;

  bool better(double risk, double time) const {
    if (!found) return true;
    const double tol = 1e-12 * std::max(1.0, std::abs(best.log_risk));
    if (risk < best.log_risk - tol) return true;
    return std::abs(risk - best.log_risk) <= tol && time < best.time_s;
  }

  void dfs(NodeId u, double t, double r) {
    if (u == goal) {
      ++best.paths_visited;
      if (better(r, t)) {
        const auto visited = best.paths_visited;
        best = {r, t, path, visited};
        found = true;
      }
      return;
    }
    for (const Arc& a : graph.arcs(u)) {
      const auto v = static_cast<std::size_t>(a.to);
      if (on_path[v]) continue;
      const double nt = t + a.time;
      const double nr = r + graph.log_risk(a.to);
      if (nt + lb[v] > budget + kBudgetTolerance) continue;
      if (found && nr > best.log_risk + 1e-12 * std::max(1.0, std::abs(best.log_risk))) continue;
      on_path[v] = 1;
      path.push_back(a.to);
      dfs(a.to, nt, nr);
      path.pop_back();
      on_path[v] = 0;
    }
  }
};

void enumerate(const CostGraph& graph, NodeId u, NodeId goal, std::vector<char>& on_path, std::vector<NodeId>& path,
               const std::function<bool(const std::vector<NodeId>&)>& visit, bool& stop) {
  if (u == goal) {
    if (!visit(path)) stop = true;
    return;
  }
  for (const Arc& a : graph.arcs(u)) {
    if (stop) return;
    const auto v = static_cast<std::size_t>(a.to);
    if (on_path[v]) continue;
    on_path[v] = 1;
    path.push_back(a.to);
    enumerate(graph, a.to, goal, on_path, path, visit, stop);
    path.pop_back();
    on_path[v] = 0;
  }
}

}  // namespace

std::optional<OracleResult> oracle_optimal(const CostGraph& graph, NodeId start, NodeId goal, double budget_s,
                                           std::size_t max_nodes) {
  check_size(graph, max_nodes);
  Search s{graph, goal, budget_s, time_lower_bound(graph, goal), {}, {}, {}, false};
  if (s.lb[static_cast<std::size_t>(start)] > budget_s + kBudgetTolerance) return std::nullopt;
  s.on_path.assign(graph.node_count(), 0);
  s.on_path[static_cast<std::size_t>(start)] = 1;
  s.path.push_back(start);
  s.dfs(start, 0.0, 0.0);
  if (!s.found) return std::nullopt;
  return s.best;
}

void for_each_simple_path(const CostGraph& graph, NodeId start, NodeId goal,
                          const std::function<bool(const std::vector<NodeId>&)>& visit, std::size_t max_nodes) {
  check_size(graph, max_nodes);
  std::vector<char> on_path(graph.node_count(), 0);
  std::vector<NodeId> path{start};
  on_path[static_cast<std::size_t>(start)] = 1;
  bool stop = false;
  enumerate(graph, start, goal, on_path, path, visit, stop);
}

}  // namespace argus::bench
