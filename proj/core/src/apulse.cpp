#include "argus/apulse.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <queue>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#include <absl/container/flat_hash_map.h>

#include "argus/diagnostics.hpp"
#include "argus/risk.hpp"

namespace argus {

void SolverConfig::validate() const {
  if (bucket_count_target < 1) throw ValidationError("bucket_count_target", "must be >= 1");
  if (!(timeout_s > 0.0)) throw ValidationError("timeout_s", "must be positive");
  if (bucket_width_s && !(*bucket_width_s > 0.0)) throw ValidationError("bucket_width_s", "must be positive");
  if (ascent_window < 1) throw ValidationError("ascent_window", "must be >= 1");
}

double auto_bucket_width(double budget_s, const SolverConfig& config) {
  if (!(budget_s > 0.0)) throw ValidationError("budget_s", "must be positive");
  if (config.bucket_count_target < 1) throw ValidationError("bucket_count_target", "must be >= 1");
  return budget_s / static_cast<double>(config.bucket_count_target);
}

std::vector<NodeId> erase_loops(std::span<const NodeId> walk) {
  std::vector<NodeId> out;
  std::unordered_map<NodeId, std::size_t> position;
  for (NodeId v : walk) {
    if (auto it = position.find(v); it != position.end()) {
      for (std::size_t i = it->second + 1; i < out.size(); ++i) position.erase(out[i]);
      out.resize(it->second + 1);
      continue;
    }
    position[v] = out.size();
    out.push_back(v);
  }
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Label {
  NodeId node;
  std::int32_t parent;
  double g_risk;
  double g_time;
  float in_slope;
};

struct QueueEntry {
  double f;
  double g_time;
  NodeId node;
  std::uint32_t label;
};

// Min-heap order: f, then accumulated time, then node id, then creation order.
struct After {
  bool operator()(const QueueEntry& a, const QueueEntry& b) const noexcept {
    if (a.f != b.f) return a.f > b.f;
    if (a.g_time != b.g_time) return a.g_time > b.g_time;
    if (a.node != b.node) return a.node > b.node;
    return a.label > b.label;
  }
};

using StateKey = std::pair<NodeId, std::uint64_t>;

// Walks from the start along arcs whose time matches the reverse time map.
std::vector<NodeId> min_time_path(const CostGraph& graph, NodeId start, const HeuristicMaps& h) {
  std::vector<NodeId> path{start};
  NodeId v = start;
  while (v != h.goal) {
    const Arc* best = nullptr;
    double best_value = kInfinity;
    for (const Arc& a : graph.arcs(v)) {
      const double value = a.time + h.time_to_goal[static_cast<std::size_t>(a.to)];
      if (value < best_value || (value == best_value && best != nullptr && a.to < best->to)) {
        best_value = value;
        best = &a;
      }
    }
    if (best == nullptr || path.size() > graph.node_count()) return {};
    v = best->to;
    path.push_back(v);
  }
  return erase_loops(path);
}

bool ascent_ok(const CostGraph& graph, std::span<const NodeId> path, int window, double threshold) {
  std::vector<double> run;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const Arc* a = graph.find_arc(path[i - 1], path[i]);
    if (a->slope > 0.0) {
      run.push_back(a->slope);
    } else {
      run.clear();
    }
    double sum = 0.0;
    const std::size_t n = std::min<std::size_t>(run.size(), static_cast<std::size_t>(window));
    for (std::size_t k = 0; k < n; ++k) sum += run[run.size() - 1 - k];
    if (sum > threshold) return false;
  }
  return true;
}

}  // namespace

SolveResult solve(const CostGraph& graph, NodeId start, NodeId goal, double budget_s, const SolverConfig& config,
                  const HeuristicMaps* heuristics) {
  config.validate();
  if (!(budget_s > 0.0) || !std::isfinite(budget_s)) throw ValidationError("budget_s", "must be positive and finite");
  const auto n = graph.node_count();
  if (start < 0 || goal < 0 || static_cast<std::size_t>(start) >= n || static_cast<std::size_t>(goal) >= n) {
    throw DomainError("start/goal node out of range");
  }

  const auto t0 = Clock::now();
  HeuristicMaps local;
  if (heuristics == nullptr || heuristics->goal != goal) {
    local = precompute_heuristics(graph, goal);
    heuristics = &local;
  }
  const auto& h_time = heuristics->time_to_goal;
  const auto& h_risk = heuristics->risk_to_goal;

  SolveResult result;
  SolverStats& stats = result.stats;
  const double limit = budget_s + kBudgetTolerance;
  const double t_min = h_time[static_cast<std::size_t>(start)];
  if (!std::isfinite(t_min)) throw NoPathError("goal is unreachable from start");
  if (t_min > limit) throw InfeasibleBudgetError(budget_s, t_min);

  const double bucket_width = config.bucket_width_s ? *config.bucket_width_s : auto_bucket_width(budget_s, config);
  stats.bucket_width_s = bucket_width;

  auto risk_bound = [&](NodeId v) { return config.use_risk_heuristic ? h_risk[static_cast<std::size_t>(v)] : 0.0; };
  auto time_bound = [&](NodeId v) { return config.prune_feasibility ? h_time[static_cast<std::size_t>(v)] : 0.0; };
  auto slot_of = [&](double g_time) -> std::uint64_t {
    if (config.dominance == DominanceRule::kTimeBucket) {
      return static_cast<std::uint64_t>(std::floor(g_time / bucket_width));
    }
    std::uint64_t bits = 0;
    std::memcpy(&bits, &g_time, sizeof bits);
    return bits;
  };

  double incumbent = kInfinity;
  std::vector<NodeId> incumbent_path;
  std::int32_t incumbent_label = -1;

  if (start == goal) {
    result.path = {start};
    return result;
  }

  if (config.seed_incumbent) {
    auto seed = min_time_path(graph, start, *heuristics);
    if (!seed.empty() && path_time(graph, seed) <= limit &&
        (!config.limit_cumulative_ascent ||
         ascent_ok(graph, seed, config.ascent_window, config.ascent_threshold))) {
      incumbent = path_log_risk(graph, seed);
      incumbent_path = std::move(seed);
      result.incumbent_history.push_back(incumbent);
      ++stats.incumbent_updates;
    }
  }

  std::vector<Label> labels;
  labels.reserve(1024);
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, After> open;
  absl::flat_hash_map<StateKey, double> best;
  best.reserve(4096);

  labels.push_back(Label{start, -1, 0.0, 0.0, 0.0f});
  best[StateKey{start, slot_of(0.0)}] = 0.0;
  open.push(QueueEntry{risk_bound(start), 0.0, start, 0});
  ++stats.labels_pushed;

  const bool exact = config.dominance == DominanceRule::kExactTime;
  auto on_chain = [&](std::int32_t l, NodeId v) {
    for (; l >= 0; l = labels[static_cast<std::size_t>(l)].parent) {
      if (labels[static_cast<std::size_t>(l)].node == v) return true;
    }
    return false;
  };

  auto out_of_time = [&]() {
    return std::chrono::duration<double>(Clock::now() - t0).count() > config.timeout_s;
  };

  while (!open.empty()) {
    if ((stats.labels_popped & 1023U) == 0 && out_of_time()) {
      stats.limit_hit = true;
      break;
    }
    if (config.node_expansion_limit && stats.labels_expanded >= *config.node_expansion_limit) {
      stats.limit_hit = true;
      break;
    }
    const QueueEntry top = open.top();
    open.pop();
    ++stats.labels_popped;
    const Label cur = labels[top.label];

    if (cur.g_time + time_bound(cur.node) > limit) {
      ++stats.pruned_feasibility;
      continue;
    }
    if (config.prune_optimality && top.f >= incumbent) {
      ++stats.pruned_optimality;
      continue;
    }
    if (auto it = best.find(StateKey{cur.node, slot_of(cur.g_time)}); it != best.end() && it->second < cur.g_risk) {
      ++stats.pruned_dominance;
      continue;
    }

    ++stats.labels_expanded;
    for (const Arc& a : graph.arcs(cur.node)) {
      const NodeId w = a.to;
      if (w == start) continue;
      const double g_time = cur.g_time + a.time;
      const double g_risk = cur.g_risk + graph.log_risk(w);
      const double tb = time_bound(w);
      if (g_time + tb > limit || !std::isfinite(tb)) {
        ++stats.pruned_feasibility;
        continue;
      }
      const double f = g_risk + risk_bound(w);
      if (config.prune_optimality && f >= incumbent) {
        ++stats.pruned_optimality;
        continue;
      }
      if (w == goal && g_risk >= incumbent) continue;
      if (config.limit_cumulative_ascent && a.slope > 0.0) {
        double run = a.slope;
        int steps = 1;
        for (std::int32_t l = top.label; steps < config.ascent_window && l >= 0 && labels[l].in_slope > 0.0f;
             l = labels[l].parent, ++steps) {
          run += labels[l].in_slope;
        }
        if (run > config.ascent_threshold) {
          ++stats.pruned_ascent;
          continue;
        }
      }
      // Zero-width buckets never merge a loop with its own prefix, so a walk
      // that cycles through riskless cells would fan out without bound.
      if (exact && !config.limit_cumulative_ascent && on_chain(top.label, w)) {
        ++stats.pruned_dominance;
        continue;
      }
      const StateKey key{w, slot_of(g_time)};
      auto [it, inserted] = best.try_emplace(key, g_risk);
      if (!inserted) {
        if (it->second <= g_risk) {
          ++stats.pruned_dominance;
          continue;
        }
        it->second = g_risk;
      }
      const auto id = static_cast<std::uint32_t>(labels.size());
      labels.push_back(Label{w, static_cast<std::int32_t>(top.label), g_risk, g_time, static_cast<float>(a.slope)});
      if (w == goal) {
        incumbent = g_risk;
        incumbent_label = static_cast<std::int32_t>(id);
        incumbent_path.clear();
        result.incumbent_history.push_back(incumbent);
        ++stats.incumbent_updates;
        continue;
      }
      open.push(QueueEntry{f, g_time, w, id});
      ++stats.labels_pushed;
    }
  }
  stats.bucket_entries = best.size();

  if (incumbent_label >= 0) {
    std::vector<NodeId> walk;
    for (std::int32_t l = incumbent_label; l >= 0; l = labels[static_cast<std::size_t>(l)].parent) {
      walk.push_back(labels[static_cast<std::size_t>(l)].node);
    }
    std::reverse(walk.begin(), walk.end());
    result.path = erase_loops(walk);
    // A loop can be the rest stop that breaks a climb; keep it if cutting it
    // would join two runs past the ascent limit.
    if (config.limit_cumulative_ascent &&
        !ascent_ok(graph, result.path, config.ascent_window, config.ascent_threshold)) {
      result.path = std::move(walk);
    }
  } else if (!incumbent_path.empty()) {
    result.path = std::move(incumbent_path);
  } else if (stats.limit_hit) {
    throw ResourceExhaustedError("solver limit reached before any feasible path was found");
  } else {
    // Only reachable when the ascent limit removes every budget-feasible path.
    throw NoPathError("no path satisfies the time budget and ascent limit");
  }

  result.anytime = stats.limit_hit;
  result.total_time_s = path_time(graph, result.path);
  result.total_log_risk = path_log_risk(graph, result.path);
  stats.wall_time_s = std::chrono::duration<double>(Clock::now() - t0).count();

  ++diagnostics::constraint_checks;
  if (result.total_time_s > limit) {
    ++diagnostics::budget_violations;
    throw std::logic_error("solver returned a path exceeding the time budget");
  }
  return result;
}

}  // namespace argus
