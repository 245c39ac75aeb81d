#include <gtest/gtest.h>

#include <cmath>

#include "argus/bench.hpp"
#include "argus/errors.hpp"
#include "argus/planner.hpp"
#include "argus/replan.hpp"
#include "test_support.hpp"

using namespace argus;

namespace {

struct World {
  Scenario scenario;
  RiskField field;
  CostGraph graph;
};

World flat_world(int rows, int cols, std::vector<ThreatSpec> threats = {}, double width = 0.0) {
  World w{Scenario::create(TerrainGrid::flat(rows, cols), MobilityModel::defaults(), std::move(threats)), {}, {}};
  w.field = w.scenario.risk_field(width);
  w.graph = apply_risk(w.scenario.graph, w.field);
  return w;
}

PlanResult plan_on(const World& w, Cell s, Cell g, MissionMode mode) {
  MissionRequest r;
  r.start = s;
  r.goal = g;
  r.mode = mode;
  return plan(w.graph, w.scenario.threats, r);
}

DynamicEvent event_with(std::vector<ThreatSpec> threats, std::size_t at = 0) {
  DynamicEvent e;
  e.new_threats = std::move(threats);
  e.current_position_index = at;
  return e;
}

void expect_valid_path(const CostGraph& g, const PlanResult& r, Cell s, Cell goal) {
  ASSERT_FALSE(r.path.empty());
  EXPECT_EQ(r.path.front(), s);
  EXPECT_EQ(r.path.back(), goal);
  const auto nodes = to_nodes(g, r.path);
  for (std::size_t i = 1; i < nodes.size(); ++i) EXPECT_NE(g.find_arc(nodes[i - 1], nodes[i]), nullptr);
  EXPECT_NEAR(r.total_time_s, testkit::sum_time(g, nodes), 1e-9);
  EXPECT_NEAR(r.total_log_risk, testkit::sum_log_risk(g, nodes), 1e-9);
}

// Brute-force rule for a cell changing under one dilated Dirac threat on a
// risk-free field: some cell within the formation disk sits strictly inside R.
bool reached(Cell c, Cell at, double range, double rho, double cell) {
  const int k = static_cast<int>(std::ceil(rho / cell)) + 1;
  for (int dr = -k; dr <= k; ++dr)
    for (int dc = -k; dc <= k; ++dc)
      if (cell * std::hypot(dr, dc) <= rho + 1e-9 && cell * std::hypot(c.row + dr - at.row, c.col + dc - at.col) < range)
        return true;
  return false;
}

}  // namespace

TEST(ApplyEvent, EmptyEventIsNoOp) {
  const auto w = flat_world(8, 8, {ThreatSpec::dirac("A", {3, 3}, {75.0, 0.2, 1.5})});
  const auto o = apply_event(w.graph, w.field, w.scenario.threats, event_with({}));
  EXPECT_EQ(o.field.log_risk, w.field.log_risk);
  EXPECT_EQ(o.field.risk_form, w.field.risk_form);
  EXPECT_EQ(o.recomputed_cells, 0u);
  for (auto c : o.changed) EXPECT_EQ(c, 0);
}

TEST(ApplyEvent, SingleDiracChangesExactlyTheDisk) {
  for (double width : {0.0, 50.0, 100.0}) {
    const auto w = flat_world(20, 20, {}, width);
    const auto t = ThreatSpec::dirac("N", {9, 11}, {110.0, 0.3, 2.0});
    const auto o = apply_event(w.graph, w.field, w.scenario.threats, event_with({t}));
    const auto full = build_risk_field(w.graph.geometry(), std::vector<ThreatSpec>{t}, width);
    const auto& geo = w.graph.geometry();
    for (std::size_t i = 0; i < geo.cell_count(); ++i) {
      const Cell c = geo.cell_at(i);
      EXPECT_EQ(o.changed[i] != 0, reached(c, {9, 11}, 110.0, width / 2.0, 25.0)) << c.row << "," << c.col;
      EXPECT_NEAR(o.field.log_risk[i], full.log_risk[i], 1e-12);
      EXPECT_NEAR(o.field.risk_form[i], full.risk_form[i], 1e-12);
    }
    EXPECT_EQ(o.recomputed_outside_region, 0u);
    EXPECT_EQ(w.field.log_risk, flat_world(20, 20, {}, width).field.log_risk);
  }
}

TEST(ApplyEvent, OverlappingThreatsMatchFullRecompute) {
  const std::vector<ThreatSpec> old{ThreatSpec::dirac("A", {4, 4}, {120.0, 0.25, 1.0}, 0.7)};
  const auto w = flat_world(18, 22, old, 50.0);
  const std::vector<ThreatSpec> fresh{ThreatSpec::dirac("B", {8, 9}, {90.0, 0.4, 2.0}),
                                      ThreatSpec::dirac("C", {10, 12}, {100.0, 0.1, 1.5}, 0.5)};
  const auto o = apply_event(w.graph, w.field, w.scenario.threats, event_with(fresh));
  std::vector<ThreatSpec> all = old;
  all.insert(all.end(), fresh.begin(), fresh.end());
  const auto full = build_risk_field(w.graph.geometry(), all, 50.0);
  const auto& geo = w.graph.geometry();
  for (std::size_t i = 0; i < geo.cell_count(); ++i) {
    const Cell c = geo.cell_at(i);
    EXPECT_NEAR(o.field.log_risk[i], full.log_risk[i], 1e-12);
    const bool in_union = reached(c, {8, 9}, 90.0, 25.0, 25.0) || reached(c, {10, 12}, 100.0, 25.0, 25.0);
    if (!in_union) EXPECT_EQ(o.field.log_risk[i], w.field.log_risk[i]);
    if (o.changed[i]) EXPECT_TRUE(in_union);
    if (!o.region[i]) EXPECT_EQ(o.field.risk_form[i], w.field.risk_form[i]);
  }
  EXPECT_EQ(o.recomputed_outside_region, 0u);
  EXPECT_TRUE(o.graph.shares_topology_with(w.graph));
  EXPECT_EQ(o.threats.size(), 3u);
}

TEST(Repair, FarThreatLeavesPathUnchanged) {
  const auto w = flat_world(12, 30);
  const auto original = plan_on(w, {2, 0}, {2, 29}, Balanced{0.0});
  const auto ev = event_with({ThreatSpec::dirac("F", {11, 15}, {75.0, 0.3, 1.0})});
  const auto o = apply_event(w.graph, w.field, w.scenario.threats, ev);
  const auto out = repair(o, original, ev, 0.5);
  EXPECT_TRUE(out.unchanged);
  EXPECT_EQ(out.plan.path, original.path);
}

TEST(Repair, MidpointThreatDetours) {
  const auto w = flat_world(21, 41);
  const auto original = plan_on(w, {10, 0}, {10, 40}, Balanced{0.0});
  const auto ev = event_with({ThreatSpec::dirac("P", {10, 20}, {125.0, 0.3, 1.5})}, 5);
  const auto o = apply_event(w.graph, w.field, w.scenario.threats, ev);
  const double slack = 0.5;
  const auto out = repair(o, original, ev, slack);
  const auto pre_nodes = to_nodes(o.graph, original.path);
  const double pre_risk = testkit::sum_log_risk(o.graph, pre_nodes);
  const double pre_time = testkit::sum_time(o.graph, pre_nodes);
  EXPECT_FALSE(out.unchanged);
  EXPECT_FALSE(out.full_replan_used);
  EXPECT_LT(out.plan.total_log_risk, pre_risk);
  EXPECT_GT(out.plan.total_time_s, pre_time);
  EXPECT_LE(out.repaired_segment_time_s, out.original_segment_time_s * (1.0 + slack) + 1e-9);
  expect_valid_path(o.graph, out.plan, {10, 0}, {10, 40});
  // The travelled prefix is kept.
  for (std::size_t i = 0; i <= 5; ++i) EXPECT_EQ(out.plan.path[i], original.path[i]);
}

TEST(Repair, ZeroSlackPicksSafestEqualTimeOption) {
  // Start and goal 2 rows and 5 columns apart: every fastest route mixes two
  // diagonals and three straight steps, so several share the minimum time.
  const auto w = flat_world(6, 6);
  const auto original = plan_on(w, {0, 0}, {2, 5}, Balanced{1.0});
  const auto ev = event_with({ThreatSpec::dirac("Z", {0, 3}, {250.0, 0.05, 1.0})});
  const auto o = apply_event(w.graph, w.field, w.scenario.threats, ev);
  const auto out = repair(o, original, ev, 0.0);
  EXPECT_NEAR(out.plan.total_time_s, original.total_time_s, 1e-9);
  const auto oracle =
      bench::oracle_optimal(o.graph, o.graph.node_at({0, 0}), o.graph.node_at({2, 5}), original.total_time_s, 36);
  ASSERT_TRUE(oracle.has_value());
  EXPECT_NEAR(out.plan.total_log_risk, oracle->log_risk, 1e-9);
  EXPECT_LT(oracle->log_risk, testkit::sum_log_risk(o.graph, to_nodes(o.graph, original.path)));
}

TEST(Repair, BudgetAndBenefitOnRandomEvents) {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    auto inst = bench::generate_instance(24, 24, 3, seed);
    MissionRequest r;
    r.start = inst.graph.cell_of(inst.start);
    r.goal = inst.graph.cell_of(inst.goal);
    r.mode = Balanced{0.0};
    const auto field = inst.scenario.risk_field(0.0);
    const auto original = plan(inst.graph, inst.scenario.threats, r);
    const Cell mid = original.path[original.path.size() / 2];
    const auto ev = event_with({ThreatSpec::dirac("X", mid, {100.0, 0.3, 2.0})}, 2);
    const auto o = apply_event(inst.graph, field, inst.scenario.threats, ev);
    for (double slack : {0.0, 0.25, 1.0}) {
      const auto out = repair(o, original, ev, slack);
      const double pre = testkit::sum_log_risk(o.graph, to_nodes(o.graph, original.path));
      EXPECT_LE(out.plan.total_log_risk, pre + 1e-9) << seed;
      if (!out.full_replan_used)
        EXPECT_LE(out.repaired_segment_time_s, out.original_segment_time_s * (1.0 + slack) + 1e-9);
      expect_valid_path(o.graph, out.plan, r.start, r.goal);
    }
  }
}

TEST(Repair, InfeasibleWindowFallsBackToFullReplan) {
  const auto w = flat_world(15, 30);
  const auto original = plan_on(w, {7, 0}, {7, 29}, Balanced{0.0});
  const auto ev = event_with({ThreatSpec::dirac("P", {7, 15}, {100.0, 0.3, 1.5})});
  const auto o = apply_event(w.graph, w.field, w.scenario.threats, ev);
  RepairConfig cfg;
  cfg.patch_solver.seed_incumbent = false;
  cfg.patch_solver.node_expansion_limit = 1;
  const auto out = repair(o, original, ev, 0.5, cfg);
  EXPECT_TRUE(out.window_widened);
  EXPECT_TRUE(out.full_replan_used);
  const auto full = full_replan(o, original, ev, 0.5, cfg);
  EXPECT_EQ(out.plan.path, full.plan.path);
}

TEST(Repair, RejectsBadInput) {
  const auto w = flat_world(5, 5);
  const auto original = plan_on(w, {0, 0}, {4, 4}, Balanced{0.5});
  const auto ev = event_with({ThreatSpec::dirac("P", {2, 2}, {50.0, 0.3, 1.5})}, 99);
  const auto o = apply_event(w.graph, w.field, w.scenario.threats, ev);
  EXPECT_THROW(repair(o, original, ev, 0.5), ValidationError);
  EXPECT_THROW(repair(o, original, event_with({}, 0), -0.1), ValidationError);
}

// Instance where the cheapest way round the pop-up leans on the old route
// well beyond the first bracket.
TEST(Repair, WiderBracketsNeverHurt) {
  const auto inst = bench::generate_instance(40, 40, 3, 308);
  MissionRequest req;
  req.start = inst.graph.cell_of(inst.start);
  req.goal = inst.graph.cell_of(inst.goal);
  req.mode = Balanced{0.0};
  const auto original = plan(inst.graph, inst.scenario.threats, req);
  const Cell mid = original.path[original.path.size() / 2];
  const auto ev = event_with({ThreatSpec::dirac("POP", mid, {150.0, 0.3, 2.0}, 0.9)}, 3);
  const auto o = apply_event(inst.graph, inst.scenario.risk_field(0.0), inst.scenario.threats, ev);

  RepairConfig narrow;
  narrow.max_widenings = 0;
  const auto first = repair(o, original, ev, 0.5, narrow);
  const auto wide = repair(o, original, ev, 0.5);
  ASSERT_FALSE(first.full_replan_used);
  ASSERT_FALSE(wide.full_replan_used);
  EXPECT_LT(wide.plan.total_log_risk, first.plan.total_log_risk - 1.0);
  EXPECT_TRUE(wide.window_widened);
  EXPECT_GT(wide.original_segment_time_s, first.original_segment_time_s);
  // Same absolute allowance as the first bracket.
  EXPECT_NEAR(wide.segment_budget_s - wide.original_segment_time_s, 0.5 * first.original_segment_time_s, 1e-9);
  EXPECT_LE(wide.repaired_segment_time_s, wide.segment_budget_s + 1e-9);
}

TEST(CompareRepairVsFull, MidpathThreat) {
  const auto w = flat_world(40, 40);
  const auto original = plan_on(w, {20, 0}, {20, 39}, Balanced{0.0});
  const auto ev = event_with({ThreatSpec::dirac("M", {20, 20}, {150.0, 0.2, 2.0})}, 3);
  const auto o = apply_event(w.graph, w.field, w.scenario.threats, ev);
  const auto rep = compare_repair_vs_full(o, original, ev, 0.5);
  EXPECT_LE(rep.risk_gap, 0.05);
  EXPECT_LT(rep.patch.stats.labels_expanded, rep.full.stats.labels_expanded);
  EXPECT_LT(rep.log_risk.delta, 0.0);
  EXPECT_GT(rep.time_s.delta, 0.0);
  EXPECT_GT(rep.survival.delta, 0.0);
  EXPECT_NEAR(rep.log_risk.post, rep.patch.plan.total_log_risk, 1e-12);
}

TEST(CompareRepairVsFull, ZeroDeltaEventKeepsPatchPath) {
  const auto w = flat_world(10, 10);
  const auto original = plan_on(w, {0, 0}, {9, 9}, Balanced{1.0});
  const auto ev = event_with({ThreatSpec::dirac("Q", {9, 0}, {50.0, 0.5, 1.0})});
  const auto o = apply_event(w.graph, w.field, w.scenario.threats, ev);
  const auto rep = compare_repair_vs_full(o, original, ev, 0.5);
  EXPECT_TRUE(rep.patch.unchanged);
  EXPECT_EQ(rep.patch.plan.path, original.path);
  EXPECT_EQ(rep.log_risk.delta, 0.0);
  EXPECT_NEAR(rep.full.plan.total_log_risk, 0.0, 1e-12);
}
