#include "argus/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <queue>
#include <stdexcept>

#include "argus/diagnostics.hpp"

namespace argus {

std::string mode_name(const MissionMode& mode) {
  struct Visitor {
    std::string operator()(const Balanced&) const { return "Balanced"; }
    std::string operator()(const FastWithinRisk&) const { return "FastWithinRisk"; }
    std::string operator()(const SafeWithinTime&) const { return "SafeWithinTime"; }
  };
  return std::visit(Visitor{}, mode);
}

void MissionRequest::validate() const {
  if (start == goal) throw ValidationError("goal", "start and goal must differ");
  if (const auto* b = std::get_if<Balanced>(&mode); b && !(b->alpha >= 0.0 && b->alpha <= 1.0)) {
    throw ValidationError("mode.alpha", "must lie in [0,1]");
  }
  if (const auto* f = std::get_if<FastWithinRisk>(&mode); f && !(f->max_risk >= 0.0 && f->max_risk <= 1.0)) {
    throw ValidationError("mode.max_risk", "must lie in [0,1]");
  }
  if (const auto* s = std::get_if<SafeWithinTime>(&mode);
      s && (!(s->budget_s > 0.0) || !std::isfinite(s->budget_s))) {
    throw ValidationError("mode.budget_s", "must be positive and finite");
  }
  if (!(formation_width_m >= 0.0) || !std::isfinite(formation_width_m)) {
    throw ValidationError("formation_width_m", "must be >= 0");
  }
  if (!(replan_slack >= 0.0) || !std::isfinite(replan_slack)) throw ValidationError("replan_slack", "must be >= 0");
}

void MissionRequest::validate(const GridGeometry& geometry, const Raster<std::uint8_t>& obstacle) const {
  validate();
  if (!geometry.contains(start)) throw ValidationError("start", "outside the grid");
  if (!geometry.contains(goal)) throw ValidationError("goal", "outside the grid");
  if (obstacle(start.row, start.col) != 0) throw ValidationError("start", "is an obstacle cell");
  if (obstacle(goal.row, goal.col) != 0) throw ValidationError("goal", "is an obstacle cell");
}

std::vector<NodeId> to_nodes(const CostGraph& graph, std::span<const Cell> cells) {
  std::vector<NodeId> out;
  out.reserve(cells.size());
  for (const Cell& c : cells) {
    const NodeId u = graph.node_at(c);
    if (u == kNoNode) {
      throw ValidationError("path", "cell (" + std::to_string(c.row) + "," + std::to_string(c.col) +
                                        ") is not a graph node");
    }
    out.push_back(u);
  }
  return out;
}

std::vector<Cell> to_cells(const CostGraph& graph, std::span<const NodeId> nodes) {
  std::vector<Cell> out;
  out.reserve(nodes.size());
  for (NodeId u : nodes) out.push_back(graph.cell_of(u));
  return out;
}

PlanResult compute_kpis(const CostGraph& graph, std::span<const ThreatSpec> threats, std::span<const NodeId> path) {
  PlanResult r;
  if (path.empty()) throw ValidationError("path", "empty path");
  r.path = to_cells(graph, path);
  r.total_time_s = path_time(graph, path);
  r.total_distance_m = path_distance(graph, path);
  r.total_log_risk = path_log_risk(graph, path);
  r.survival_probability = std::exp(-r.total_log_risk);
  for (NodeId u : path) r.max_cell_risk = std::max(r.max_cell_risk, graph.cell_risk(u));
  for (std::size_t i = 1; i < path.size(); ++i) {
    const Arc* a = graph.find_arc(path[i - 1], path[i]);
    const double risk = graph.cell_risk(path[i]);
    if (risk < 0.15) {
      r.exposure.low_m += a->distance;
    } else if (risk <= 0.5) {
      r.exposure.medium_m += a->distance;
    } else {
      r.exposure.high_m += a->distance;
    }
    r.terrain_composition_m[graph.land_cover(path[i])] += a->distance;
  }
  const auto& geometry = graph.geometry();
  for (const ThreatSpec& t : threats) {
    const Point m = t.mean_location(geometry);
    ThreatApproach cpa{t.id, kInfinity, {}};
    for (NodeId u : path) {
      const double d = distance(graph.centroid(u), m);
      if (d < cpa.distance_m) {
        cpa.distance_m = d;
        cpa.closest_cell = graph.cell_of(u);
      }
    }
    r.closest_approach.push_back(cpa);
  }
  return r;
}

namespace {

struct Endpoints {
  NodeId start;
  NodeId goal;
};

Endpoints resolve(const CostGraph& graph, const MissionRequest& req) {
  req.validate();
  const NodeId s = graph.node_at(req.start);
  const NodeId g = graph.node_at(req.goal);
  if (s == kNoNode) throw ValidationError("start", "not a traversable cell");
  if (g == kNoNode) throw ValidationError("goal", "not a traversable cell");
  return {s, g};
}

const HeuristicMaps& heuristics_for(const CostGraph& graph, NodeId goal, const HeuristicMaps* given,
                                    HeuristicMaps& storage) {
  if (given != nullptr && given->goal == goal && given->time_to_goal.size() == graph.node_count()) return *given;
  storage = precompute_heuristics(graph, goal);
  return storage;
}

struct AStarOutcome {
  std::vector<NodeId> path;
  SolverStats stats;
};

// Best-first search on an additive primary cost with accumulated time as the
// secondary key. Both heuristics must be consistent.
template <class Cost, class Bound, class Allowed>
AStarOutcome astar(const CostGraph& graph, NodeId start, NodeId goal, Cost cost, Bound bound,
                   const std::vector<double>& time_bound, Allowed allowed) {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  AStarOutcome out;
  const std::size_t n = graph.node_count();
  std::vector<double> g_cost(n, kInfinity);
  std::vector<double> g_time(n, kInfinity);
  std::vector<NodeId> parent(n, kNoNode);
  std::vector<std::uint8_t> closed(n, 0);

  struct Entry {
    double f;
    double ft;
    NodeId node;
    bool operator>(const Entry& o) const noexcept {
      if (f != o.f) return f > o.f;
      if (ft != o.ft) return ft > o.ft;
      return node > o.node;
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  const auto si = static_cast<std::size_t>(start);
  g_cost[si] = 0.0;
  g_time[si] = 0.0;
  open.push({bound(start), time_bound[si], start});
  ++out.stats.labels_pushed;
  while (!open.empty()) {
    const Entry e = open.top();
    open.pop();
    ++out.stats.labels_popped;
    const auto ui = static_cast<std::size_t>(e.node);
    if (closed[ui]) continue;
    closed[ui] = 1;
    if (e.node == goal) break;
    ++out.stats.labels_expanded;
    for (const Arc& a : graph.arcs(e.node)) {
      const auto wi = static_cast<std::size_t>(a.to);
      if (closed[wi] || !allowed(a.to)) continue;
      const double nc = g_cost[ui] + cost(a);
      const double nt = g_time[ui] + a.time;
      if (nc < g_cost[wi] || (nc == g_cost[wi] && nt < g_time[wi])) {
        g_cost[wi] = nc;
        g_time[wi] = nt;
        parent[wi] = e.node;
        open.push({nc + bound(a.to), nt + time_bound[wi], a.to});
        ++out.stats.labels_pushed;
      }
    }
  }
  if (closed[static_cast<std::size_t>(goal)]) {
    for (NodeId v = goal; v != kNoNode; v = parent[static_cast<std::size_t>(v)]) out.path.push_back(v);
    std::reverse(out.path.begin(), out.path.end());
  }
  out.stats.wall_time_s = std::chrono::duration<double>(Clock::now() - t0).count();
  return out;
}

PlanResult finish(const CostGraph& graph, std::span<const ThreatSpec> threats, const MissionRequest& req,
                  std::span<const NodeId> path, const SolverStats& stats) {
  PlanResult r = compute_kpis(graph, threats, path);
  r.request = req;
  r.stats = stats;
  return r;
}

bool connected_under(const CostGraph& graph, NodeId s, NodeId g, double ceiling) {
  if (graph.cell_risk(s) > ceiling || graph.cell_risk(g) > ceiling) return false;
  std::vector<std::uint8_t> seen(graph.node_count(), 0);
  std::deque<NodeId> queue{s};
  seen[static_cast<std::size_t>(s)] = 1;
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    if (u == g) return true;
    for (const Arc& a : graph.arcs(u)) {
      const auto wi = static_cast<std::size_t>(a.to);
      if (seen[wi] || graph.cell_risk(a.to) > ceiling) continue;
      seen[wi] = 1;
      queue.push_back(a.to);
    }
  }
  return false;
}

}  // namespace

PlanResult plan_balanced(const CostGraph& graph, std::span<const ThreatSpec> threats, const MissionRequest& req,
                         const HeuristicMaps* heuristics) {
  const auto [s, g] = resolve(graph, req);
  const auto* mode = std::get_if<Balanced>(&req.mode);
  if (mode == nullptr) throw ValidationError("mode", "expected Balanced");
  HeuristicMaps storage;
  const HeuristicMaps& h = heuristics_for(graph, g, heuristics, storage);
  const double t_ref = h.time_to_goal[static_cast<std::size_t>(s)];
  if (!std::isfinite(t_ref)) throw NoPathError("goal is unreachable from start");
  double l_ref = h.risk_to_goal[static_cast<std::size_t>(s)];
  if (!(l_ref > 0.0)) l_ref = 1.0;
  const double wt = mode->alpha / t_ref;
  const double wr = (1.0 - mode->alpha) / l_ref;

  auto outcome = astar(
      graph, s, g, [&](const Arc& a) { return wt * a.time + wr * graph.log_risk(a.to); },
      [&](NodeId v) {
        const auto i = static_cast<std::size_t>(v);
        return wt * h.time_to_goal[i] + wr * h.risk_to_goal[i];
      },
      h.time_to_goal, [](NodeId) { return true; });
  if (outcome.path.empty()) throw NoPathError("goal is unreachable from start");
  return finish(graph, threats, req, outcome.path, outcome.stats);
}

PlanResult plan_fast_within_risk(const CostGraph& graph, std::span<const ThreatSpec> threats,
                                 const MissionRequest& req, const HeuristicMaps* heuristics) {
  const auto [s, g] = resolve(graph, req);
  const auto* mode = std::get_if<FastWithinRisk>(&req.mode);
  if (mode == nullptr) throw ValidationError("mode", "expected FastWithinRisk");
  HeuristicMaps storage;
  const HeuristicMaps& h = heuristics_for(graph, g, heuristics, storage);
  if (!std::isfinite(h.time_to_goal[static_cast<std::size_t>(s)])) {
    throw NoPathError("goal is unreachable from start");
  }

  double ceiling = mode->max_risk;
  bool fallback = false;
  if (!connected_under(graph, s, g, ceiling)) {
    std::vector<double> levels(graph.cell_risks().begin(), graph.cell_risks().end());
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    auto lo = std::upper_bound(levels.begin(), levels.end(), ceiling);
    auto hi = levels.end();
    // Connectivity is monotone in the ceiling; find the first level that restores it.
    while (lo < hi) {
      auto mid = lo + (hi - lo) / 2;
      if (connected_under(graph, s, g, *mid)) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    if (lo == levels.end()) throw NoPathError("no risk ceiling connects start and goal");
    ceiling = *lo;
    fallback = true;
  }

  auto outcome = astar(
      graph, s, g, [](const Arc& a) { return a.time; },
      [&](NodeId v) { return h.time_to_goal[static_cast<std::size_t>(v)]; }, h.time_to_goal,
      [&](NodeId v) { return graph.cell_risk(v) <= ceiling; });
  if (outcome.path.empty()) throw NoPathError("goal is unreachable under the risk ceiling");
  PlanResult r = finish(graph, threats, req, outcome.path, outcome.stats);
  r.fallback_used = fallback;
  r.effective_max_risk = ceiling;
  ++diagnostics::constraint_checks;
  if (r.max_cell_risk > ceiling) {
    ++diagnostics::ceiling_violations;
    throw std::logic_error("fast-within-risk path exceeds its risk ceiling");
  }
  return r;
}

PlanResult plan_safe_within_time(const CostGraph& graph, std::span<const ThreatSpec> threats,
                                 const MissionRequest& req, const SolverConfig& config,
                                 const HeuristicMaps* heuristics) {
  const auto [s, g] = resolve(graph, req);
  const auto* mode = std::get_if<SafeWithinTime>(&req.mode);
  if (mode == nullptr) throw ValidationError("mode", "expected SafeWithinTime");
  HeuristicMaps storage;
  const HeuristicMaps& h = heuristics_for(graph, g, heuristics, storage);
  SolveResult solved = solve(graph, s, g, mode->budget_s, config, &h);
  PlanResult r = finish(graph, threats, req, solved.path, solved.stats);
  r.anytime = solved.anytime;
  return r;
}

PlanResult plan(const CostGraph& graph, std::span<const ThreatSpec> threats, const MissionRequest& req,
                const SolverConfig& config, const HeuristicMaps* heuristics) {
  if (std::holds_alternative<Balanced>(req.mode)) return plan_balanced(graph, threats, req, heuristics);
  if (std::holds_alternative<FastWithinRisk>(req.mode)) return plan_fast_within_risk(graph, threats, req, heuristics);
  return plan_safe_within_time(graph, threats, req, config, heuristics);
}

Scenario Scenario::create(TerrainGrid grid, MobilityModel mobility, std::vector<ThreatSpec> threats) {
  Scenario sc;
  sc.graph = build_graph(grid, mobility);
  for (ThreatSpec& t : threats) t.normalize(grid.geometry);
  sc.grid = std::move(grid);
  sc.mobility = std::move(mobility);
  sc.threats = std::move(threats);
  return sc;
}

RiskField Scenario::risk_field(double formation_width_m) const {
  return build_risk_field(grid.geometry, threats, formation_width_m);
}

CostGraph Scenario::risk_graph(double formation_width_m) const {
  return apply_risk(graph, risk_field(formation_width_m));
}

PlanResult plan_mission(const Scenario& scenario, const MissionRequest& req, const SolverConfig& config) {
  req.validate(scenario.grid.geometry, scenario.grid.obstacle);
  return plan(scenario.risk_graph(req.formation_width_m), scenario.threats, req, config);
}

}  // namespace argus
