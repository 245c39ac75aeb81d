#include <algorithm>
#include <chrono>
#include <deque>

#include "argus/bench.hpp"

namespace argus::bench {
namespace {

struct Label {
  NodeId node;
  double time;
  double risk;
  std::int64_t parent;
  bool alive;
};

}  // namespace

BaselineResult solve_label_correcting(const CostGraph& graph, NodeId start, NodeId goal, double budget_s,
                                      double timeout_s) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  BaselineResult out;
  const auto lb = reverse_min_time(graph, goal);
  const double limit = budget_s + kBudgetTolerance;
  if (lb[static_cast<std::size_t>(start)] > limit) {
    out.wall_time_s = std::chrono::duration<double>(clock::now() - t0).count();
    return out;
  }

  std::vector<Label> labels;
  std::vector<std::vector<std::int64_t>> front(graph.node_count());
  std::deque<std::int64_t> queue;
  labels.push_back({start, 0.0, 0.0, -1, true});
  front[static_cast<std::size_t>(start)].push_back(0);
  queue.push_back(0);
  out.labels_created = 1;

  std::uint64_t iter = 0;
  while (!queue.empty()) {
    if ((++iter & 1023u) == 0 &&
        std::chrono::duration<double>(clock::now() - t0).count() > timeout_s) {
      out.timed_out = true;
      break;
    }
    const std::int64_t li = queue.front();
    queue.pop_front();
    if (!labels[static_cast<std::size_t>(li)].alive) continue;
    const Label cur = labels[static_cast<std::size_t>(li)];
    if (cur.node == goal) continue;
    ++out.labels_expanded;
    for (const Arc& a : graph.arcs(cur.node)) {
      const double t = cur.time + a.time;
      if (t + lb[static_cast<std::size_t>(a.to)] > limit) continue;
      const double r = cur.risk + graph.log_risk(a.to);
      auto& f = front[static_cast<std::size_t>(a.to)];
      bool dominated = false;
      for (std::int64_t other : f) {
        const Label& o = labels[static_cast<std::size_t>(other)];
        if (o.time <= t && o.risk <= r) {
          dominated = true;
          break;
        }
      }
      if (dominated) continue;
      std::erase_if(f, [&](std::int64_t other) {
        Label& o = labels[static_cast<std::size_t>(other)];
        if (t <= o.time && r <= o.risk) {
          o.alive = false;
          return true;
        }
        return false;
      });
      const auto id = static_cast<std::int64_t>(labels.size());
      labels.push_back({a.to, t, r, li, true});
      f.push_back(id);
      queue.push_back(id);
      ++out.labels_created;
    }
  }

  std::int64_t best = -1;
  for (std::int64_t id : front[static_cast<std::size_t>(goal)]) {
    const Label& l = labels[static_cast<std::size_t>(id)];
    if (l.time > limit) continue;
    if (best < 0 || l.risk < labels[static_cast<std::size_t>(best)].risk ||
        (l.risk == labels[static_cast<std::size_t>(best)].risk && l.time < labels[static_cast<std::size_t>(best)].time))
      best = id;
  }
  if (best >= 0) {
    for (std::int64_t id = best; id >= 0; id = labels[static_cast<std::size_t>(id)].parent)
      out.path.push_back(labels[static_cast<std::size_t>(id)].node);
    std::reverse(out.path.begin(), out.path.end());
    out.log_risk = path_log_risk(graph, out.path);
    out.time_s = path_time(graph, out.path);
  }
  out.wall_time_s = std::chrono::duration<double>(clock::now() - t0).count();
  return out;
}

}  // namespace argus::bench
