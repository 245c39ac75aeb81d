#include "argus/replan.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>

namespace argus {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Marks every cell within `radius` of a prior support cell of any threat.
std::vector<std::uint8_t> disk_union(const GridGeometry& g, std::span<const ThreatSpec> threats,
                                     double extra_radius, bool use_threat_range) {
  std::vector<std::uint8_t> mask(g.cell_count(), 0);
  for (const ThreatSpec& t : threats) {
    const double radius = (use_threat_range ? t.detection.range_m : 0.0) + extra_radius;
    const int reach = static_cast<int>(std::floor(radius / g.cell_size + 1e-9));
    for (const PriorCell& p : t.prior) {
      if (p.weight <= 0.0) continue;
      for (int r = std::max(0, p.cell.row - reach); r <= std::min(g.rows - 1, p.cell.row + reach); ++r) {
        for (int c = std::max(0, p.cell.col - reach); c <= std::min(g.cols - 1, p.cell.col + reach); ++c) {
          if (g.cell_size * std::hypot(r - p.cell.row, c - p.cell.col) <= radius + 1e-9 * g.cell_size) {
            mask[g.index({r, c})] = 1;
          }
        }
      }
    }
  }
  return mask;
}

double max_range(std::span<const ThreatSpec> threats) {
  double r = 0.0;
  for (const ThreatSpec& t : threats) r = std::max(r, t.detection.range_m);
  return r;
}

struct AffectedSpan {
  std::size_t entry;
  std::size_t exit;
};

// Path indices bracketing every changed cell after `cur`, pushed out by the
// safety margin. nullopt when no upcoming cell changed.
std::optional<AffectedSpan> affected_span(const RiskOverlay& overlay, std::span<const NodeId> nodes, std::size_t cur,
                                          double margin_m) {
  const CostGraph& graph = overlay.graph;
  const GridGeometry& g = graph.geometry();
  std::size_t first = nodes.size();
  std::size_t last = 0;
  for (std::size_t i = cur + 1; i < nodes.size(); ++i) {
    if (overlay.changed[g.index(graph.cell_of(nodes[i]))]) {
      first = std::min(first, i);
      last = std::max(last, i);
    }
  }
  if (first == nodes.size()) return std::nullopt;
  const auto steps = static_cast<std::size_t>(std::ceil(margin_m / g.cell_size - 1e-9));
  return AffectedSpan{first > cur + 1 + steps ? first - 1 - steps : cur, std::min(nodes.size() - 1, last + 1 + steps)};
}

std::span<const NodeId> slice(std::span<const NodeId> nodes, std::size_t from, std::size_t to_inclusive) {
  return nodes.subspan(from, to_inclusive - from + 1);
}

PlanResult finish_plan(const RiskOverlay& overlay, const PlanResult& original, std::span<const NodeId> path) {
  PlanResult r = compute_kpis(overlay.graph, overlay.threats, path);
  r.request = original.request;
  return r;
}

}  // namespace

RiskOverlay apply_event(const CostGraph& graph, const RiskField& field, std::span<const ThreatSpec> threats,
                        const DynamicEvent& event) {
  const GridGeometry& g = graph.geometry();
  RiskOverlay out;
  out.field = field;
  out.threats.assign(threats.begin(), threats.end());
  out.changed.assign(g.cell_count(), 0);

  std::vector<ThreatSpec> fresh = event.new_threats;
  for (ThreatSpec& t : fresh) t.normalize(g);
  out.threats.insert(out.threats.end(), fresh.begin(), fresh.end());

  const double rho = field.formation_width_m / 2.0;
  out.region = disk_union(g, fresh, rho, true);
  if (fresh.empty()) {
    out.graph = graph;
    return out;
  }

  // Pre-dilation risk only moves where some new threat has non-zero detection.
  for (const ThreatSpec& t : fresh) {
    const Raster<double> pbar = expected_detection(t, g);
    for (std::size_t i = 0; i < pbar.size(); ++i) {
      if (pbar[i] == 0.0) continue;
      const Cell c = g.cell_at(i);
      out.field.p_det[i] = 1.0 - (1.0 - out.field.p_det[i]) * (1.0 - pbar[i]);
      out.field.risk[i] = 1.0 - (1.0 - out.field.risk[i]) * (1.0 - pbar[i] * t.impact_at(c));
    }
  }

  const auto offsets = formation_offsets(field.formation_width_m, g.cell_size);
  // Direct distance test, kept separate from disk_union for the locality counter.
  auto within_reach = [&](Cell c) {
    for (const ThreatSpec& t : fresh) {
      for (const PriorCell& p : t.prior) {
        if (p.weight > 0.0 && distance(g.centroid(c), g.centroid(p.cell)) <= t.detection.range_m + rho + 1e-6) {
          return true;
        }
      }
    }
    return false;
  };
  for (std::size_t i = 0; i < out.region.size(); ++i) {
    if (!out.region[i]) continue;
    const Cell c = g.cell_at(i);
    double m = out.field.risk[i];
    for (const Cell& o : offsets) {
      const Cell n{c.row + o.row, c.col + o.col};
      if (!g.contains(n)) continue;
      m = std::max(m, out.field.risk(n.row, n.col));
    }
    out.field.risk_form[i] = m;
    out.field.log_risk[i] = log_cost(m);
    ++out.recomputed_cells;
    if (!within_reach(c)) ++out.recomputed_outside_region;
    if (out.field.log_risk[i] != field.log_risk[i]) out.changed[i] = 1;
  }
  out.graph = apply_risk(graph, out.field);
  return out;
}

RepairOutcome full_replan(const RiskOverlay& overlay, const PlanResult& original, const DynamicEvent& event,
                          double slack, const RepairConfig& config) {
  const auto t0 = Clock::now();
  const CostGraph& graph = overlay.graph;
  const auto nodes = to_nodes(graph, original.path);
  if (event.current_position_index >= nodes.size()) {
    throw ValidationError("at_index", "current position is past the end of the path");
  }
  const std::size_t cur = event.current_position_index;
  RepairOutcome out;
  out.full_replan_used = true;
  const double margin = config.safety_margin_m.value_or(2.0 * graph.geometry().cell_size);
  const auto span = affected_span(overlay, nodes, cur, margin);
  const double rest_time = path_time(graph, slice(nodes, cur, nodes.size() - 1));
  // The patch may stretch the affected segment by `slack`; give the full
  // replan the same absolute allowance over the remaining route.
  const double segment_time = span ? path_time(graph, slice(nodes, span->entry, span->exit)) : 0.0;
  out.original_segment_time_s = rest_time;
  out.segment_budget_s = rest_time + slack * segment_time;
  if (cur + 1 >= nodes.size()) {
    out.unchanged = true;
    out.plan = finish_plan(overlay, original, nodes);
    out.wall_time_s = seconds_since(t0);
    return out;
  }
  SolveResult solved = solve(graph, nodes[cur], nodes.back(), out.segment_budget_s, config.full_solver);
  out.stats = solved.stats;
  out.repaired_segment_time_s = solved.total_time_s;
  std::vector<NodeId> spliced(nodes.begin(), nodes.begin() + static_cast<std::ptrdiff_t>(cur));
  spliced.insert(spliced.end(), solved.path.begin(), solved.path.end());
  spliced = erase_loops(spliced);
  out.plan = finish_plan(overlay, original, spliced);
  out.plan.anytime = solved.anytime;
  out.plan.stats = solved.stats;
  out.wall_time_s = seconds_since(t0);
  return out;
}

RepairOutcome repair(const RiskOverlay& overlay, const PlanResult& original, const DynamicEvent& event,
                     double slack, const RepairConfig& config) {
  if (!(slack >= 0.0) || !std::isfinite(slack)) throw ValidationError("slack", "must be >= 0");
  const auto t0 = Clock::now();
  const CostGraph& graph = overlay.graph;
  const GridGeometry& g = graph.geometry();
  const auto nodes = to_nodes(graph, original.path);
  if (nodes.empty()) throw ValidationError("path", "original plan has an empty path");
  if (event.current_position_index >= nodes.size()) {
    throw ValidationError("at_index", "current position is past the end of the path");
  }
  const std::size_t cur = event.current_position_index;

  RepairOutcome out;
  const double margin = config.safety_margin_m.value_or(2.0 * g.cell_size);
  const auto span = affected_span(overlay, nodes, cur, margin);
  if (!span) {
    out.unchanged = true;
    out.plan = finish_plan(overlay, original, nodes);
    out.plan.fallback_used = original.fallback_used;
    out.plan.effective_max_risk = original.effective_max_risk;
    out.wall_time_s = seconds_since(t0);
    return out;
  }
  // The slack is granted once, on the first bracket; wider brackets get the
  // same absolute allowance on top of their own original time.
  const double allowance = slack * path_time(graph, slice(nodes, span->entry, span->exit));
  const std::span<const ThreatSpec> fresh(overlay.threats.end() - static_cast<std::ptrdiff_t>(event.new_threats.size()),
                                          overlay.threats.end());
  std::optional<RepairOutcome> best;
  double step_margin = margin;
  for (int attempt = 0; attempt <= config.max_widenings; ++attempt, step_margin *= config.widen_factor) {
    const auto sp = affected_span(overlay, nodes, cur, step_margin);
    const std::size_t entry = sp->entry;
    const std::size_t exit = sp->exit;
    const auto segment = slice(nodes, entry, exit);
    RepairOutcome cand;
    cand.window.entry_index = entry;
    cand.window.exit_index = exit;
    cand.window_widened = attempt > 0;
    cand.original_segment_time_s = path_time(graph, segment);
    cand.segment_budget_s = cand.original_segment_time_s + allowance;
    const double segment_risk = path_log_risk(graph, segment);
    const double radius = max_range(fresh) + overlay.field.formation_width_m / 2.0 + step_margin;

    const auto mask = disk_union(g, fresh, radius, false);
    std::vector<NodeId> window(segment.begin(), segment.end());
    std::vector<std::uint8_t> in_window(graph.node_count(), 0);
    for (NodeId u : window) in_window[static_cast<std::size_t>(u)] = 1;
    for (std::size_t u = 0; u < graph.node_count(); ++u) {
      if (!mask[g.index(graph.cell_of(static_cast<NodeId>(u)))]) continue;
      in_window[u] = 1;
    }
    // One-cell boundary ring.
    std::vector<std::uint8_t> grown = in_window;
    for (std::size_t u = 0; u < graph.node_count(); ++u) {
      if (!in_window[u]) continue;
      for (const Arc& a : graph.arcs(static_cast<NodeId>(u))) grown[static_cast<std::size_t>(a.to)] = 1;
    }
    std::vector<std::uint8_t> on_segment(graph.node_count(), 0);
    for (NodeId u : segment) on_segment[static_cast<std::size_t>(u)] = 1;
    for (std::size_t u = 0; u < graph.node_count(); ++u) {
      if (grown[u] && !on_segment[u]) window.push_back(static_cast<NodeId>(u));
    }
    cand.window.nodes = window;
    cand.window.radius_m = radius;

    const auto sub = graph.induced(window);
    std::vector<NodeId> repaired;
    try {
      SolveResult solved = solve(sub.graph, sub.to_local(nodes[entry]), sub.to_local(nodes[exit]),
                                 cand.segment_budget_s, config.patch_solver);
      repaired.reserve(solved.path.size());
      for (NodeId l : solved.path) repaired.push_back(sub.to_parent[static_cast<std::size_t>(l)]);
      if (path_log_risk(graph, repaired) > segment_risk) repaired.assign(segment.begin(), segment.end());
      cand.stats = solved.stats;
      cand.plan.anytime = solved.anytime;
    } catch (const NoPathError&) {
      continue;
    } catch (const ResourceExhaustedError&) {
      continue;
    }
    cand.repaired_segment_time_s = path_time(graph, repaired);
    std::vector<NodeId> spliced(nodes.begin(), nodes.begin() + static_cast<std::ptrdiff_t>(entry));
    spliced.insert(spliced.end(), repaired.begin(), repaired.end());
    spliced.insert(spliced.end(), nodes.begin() + static_cast<std::ptrdiff_t>(exit) + 1, nodes.end());
    const bool anytime = cand.plan.anytime;
    cand.plan = finish_plan(overlay, original, erase_loops(spliced));
    cand.plan.anytime = anytime;
    cand.plan.stats = cand.stats;
    if (!best || cand.plan.total_log_risk < best->plan.total_log_risk) best = std::move(cand);
    // Clearing the new threat is not enough: the cheapest way round may lean
    // on stretches of the old route further out. Stop once nothing is left to add.
    if (entry == cur && exit == nodes.size() - 1) break;
  }
  if (best) {
    best->wall_time_s = seconds_since(t0);
    return *best;
  }

  RepairOutcome full = full_replan(overlay, original, event, slack, config);
  full.window_widened = true;
  full.wall_time_s = seconds_since(t0);
  return full;
}

void fill_deltas(const RiskOverlay& overlay, const PlanResult& original, const PlanResult& repaired,
                 ComparisonReport& report) {
  const auto nodes = to_nodes(overlay.graph, original.path);
  const double pre_risk = path_log_risk(overlay.graph, nodes);
  const double pre_time = path_time(overlay.graph, nodes);
  auto rel = [](double pre, double post) { return pre != 0.0 ? (post - pre) / pre : 0.0; };
  report.log_risk = {pre_risk, repaired.total_log_risk, rel(pre_risk, repaired.total_log_risk)};
  report.time_s = {pre_time, repaired.total_time_s, rel(pre_time, repaired.total_time_s)};
  const double pre_surv = std::exp(-pre_risk);
  report.survival = {pre_surv, repaired.survival_probability, repaired.survival_probability - pre_surv};
}

ComparisonReport compare_repair_vs_full(const RiskOverlay& overlay, const PlanResult& original,
                                        const DynamicEvent& event, double slack, const RepairConfig& config) {
  ComparisonReport report;
  report.patch = repair(overlay, original, event, slack, config);
  report.patch_wall_s = report.patch.wall_time_s;
  if (report.patch.full_replan_used) {
    report.full = report.patch;
    report.full_wall_s = report.patch.wall_time_s;
  } else {
    report.full = full_replan(overlay, original, event, slack, config);
    report.full_wall_s = report.full.wall_time_s;
  }
  fill_deltas(overlay, original, report.patch.plan, report);
  const double full_risk = report.full.plan.total_log_risk;
  report.risk_gap = (report.patch.plan.total_log_risk - full_risk) / std::max(full_risk, 1e-12);
  return report;
}

}  // namespace argus
