#include <functional>
#include <queue>
#include <utility>

#include "argus/apulse.hpp"

namespace argus {

namespace {

template <class ArcCost>
std::vector<double> reverse_dijkstra(const CostGraph& graph, NodeId goal, ArcCost cost) {
  if (goal < 0 || static_cast<std::size_t>(goal) >= graph.node_count()) {
    throw DomainError("goal node out of range");
  }
  std::vector<double> dist(graph.node_count(), kInfinity);
  using Entry = std::pair<double, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  dist[static_cast<std::size_t>(goal)] = 0.0;
  open.emplace(0.0, goal);
  while (!open.empty()) {
    const auto [d, v] = open.top();
    open.pop();
    if (d > dist[static_cast<std::size_t>(v)]) continue;
    // Arcs are symmetric in topology: each arc v->u pairs with u->v.
    for (const Arc& a : graph.arcs(v)) {
      const double nd = d + cost(a, v);
      auto& du = dist[static_cast<std::size_t>(a.to)];
      if (nd < du) {
        du = nd;
        open.emplace(nd, a.to);
      }
    }
  }
  return dist;
}

}  // namespace

std::vector<double> reverse_min_time(const CostGraph& graph, NodeId goal) {
  return reverse_dijkstra(graph, goal, [](const Arc& a, NodeId) { return a.time_back; });
}

std::vector<double> reverse_min_risk(const CostGraph& graph, NodeId goal) {
  return reverse_dijkstra(graph, goal, [&graph](const Arc&, NodeId head) { return graph.log_risk(head); });
}

HeuristicMaps precompute_heuristics(const CostGraph& graph, NodeId goal) {
  HeuristicMaps h;
  h.goal = goal;
  h.time_to_goal = reverse_min_time(graph, goal);
  h.risk_to_goal = reverse_min_risk(graph, goal);
  return h;
}

}  // namespace argus
