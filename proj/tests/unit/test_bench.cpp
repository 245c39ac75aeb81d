#include <gtest/gtest.h>

#include "argus/apulse.hpp"
#include "argus/bench.hpp"
#include "argus/errors.hpp"
#include "argus/planner.hpp"
#include "test_support.hpp"

using namespace argus;

TEST(GenerateInstance, SameSeedSameInstance) {
  const auto a = bench::generate_instance(16, 20, 3, 9);
  const auto b = bench::generate_instance(16, 20, 3, 9);
  const auto c = bench::generate_instance(16, 20, 3, 10);
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_NE(a.hash(), c.hash());
  EXPECT_EQ(a.graph.log_risks().size(), b.graph.log_risks().size());
  EXPECT_DOUBLE_EQ(a.t_min, b.t_min);
}

TEST(GenerateInstance, OppositeCornersAndExactTmin) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto inst = bench::generate_instance(12, 15, 2, seed);
    EXPECT_EQ(inst.graph.cell_of(inst.start), (Cell{0, 0}));
    EXPECT_EQ(inst.graph.cell_of(inst.goal), (Cell{11, 14}));
    MissionRequest r;
    r.start = {0, 0};
    r.goal = {11, 14};
    r.mode = Balanced{1.0};
    EXPECT_NEAR(plan(inst.graph, {}, r).total_time_s, inst.t_min, 1e-9);
    EXPECT_NEAR(inst.budget(0.2), 1.2 * inst.t_min, 1e-12);
  }
}

TEST(GenerateInstance, NoThreatsMeansMinTimeForAnyBudget) {
  const auto inst = bench::generate_instance(14, 14, 0, 3);
  for (double slack : {0.0, 0.3, 2.0}) {
    const auto r = solve(inst.graph, inst.start, inst.goal, inst.budget(slack));
    EXPECT_EQ(r.total_log_risk, 0.0);
    EXPECT_LE(r.total_time_s, inst.budget(slack) + 1e-9);
  }
}

TEST(Oracle, FrozenTenByTenSeed42) {
  const auto inst = bench::generate_instance(10, 10, 2, 42);
  ASSERT_EQ(inst.graph.node_count(), 90u);
  EXPECT_NEAR(inst.t_min, 64.973670650, 1e-6);
  const std::vector<std::pair<double, double>> expected{{0.1, 12.161129213081665}, {0.2, 9.5553057141238131},
                                                        {0.5, 3.5115755821246801}};
  for (const auto& [slack, risk] : expected) {
    const auto o = bench::oracle_optimal(inst.graph, inst.start, inst.goal, inst.budget(slack), 100);
    ASSERT_TRUE(o.has_value());
    EXPECT_NEAR(o->log_risk, risk, 1e-9);
    EXPECT_LE(o->time_s, inst.budget(slack) + 1e-9);
    EXPECT_NEAR(solve(inst.graph, inst.start, inst.goal, inst.budget(slack)).total_log_risk, risk, 1e-9);
  }
}

TEST(Oracle, SizeGuardAndInfeasibleBudget) {
  const auto inst = bench::generate_instance(8, 8, 1, 1);
  EXPECT_THROW(bench::oracle_optimal(inst.graph, inst.start, inst.goal, inst.budget(0.2)), DomainError);
  const auto small = testkit::random_graph(4, 4, 5);
  const NodeId s = small.graph.node_at({0, 0}), t = small.graph.node_at({3, 3});
  EXPECT_FALSE(bench::oracle_optimal(small.graph, s, t, 1.0).has_value());
  EXPECT_TRUE(bench::oracle_optimal(small.graph, s, t, 1e6).has_value());
}

TEST(Oracle, VisitsEverySimplePathOnTinyGraph) {
  // 2x2 king graph: from one corner to the opposite there are 5 simple paths.
  const auto g = build_graph(TerrainGrid::flat(2, 2), MobilityModel::defaults());
  int count = 0;
  bench::for_each_simple_path(g, g.node_at({0, 0}), g.node_at({1, 1}), [&](const std::vector<NodeId>&) {
    ++count;
    return true;
  });
  EXPECT_EQ(count, 5);
}

TEST(Baseline, MatchesOracleOnSmallInstances) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const auto rg = testkit::random_graph(4, 4, seed, 0.1);
    const auto& g = rg.graph;
    const NodeId s = g.node_at({0, 0}), t = g.node_at({3, 3});
    if (s == kNoNode || t == kNoNode) continue;
    double t_min = kInfinity;
    bench::for_each_simple_path(g, s, t, [&](const std::vector<NodeId>& p) {
      t_min = std::min(t_min, testkit::sum_time(g, p));
      return true;
    });
    if (!std::isfinite(t_min)) continue;
    for (double slack : {0.0, 0.2, 0.6}) {
      const double budget = t_min * (1.0 + slack);
      const auto o = bench::oracle_optimal(g, s, t, budget);
      const auto b = bench::solve_label_correcting(g, s, t, budget, 60.0);
      ASSERT_TRUE(o.has_value());
      ASSERT_FALSE(b.timed_out);
      EXPECT_NEAR(b.log_risk, o->log_risk, 1e-9) << seed;
      EXPECT_LE(b.time_s, budget + 1e-9);
    }
  }
}

TEST(RunSweep, ReportShape) {
  bench::SweepOptions opt;
  opt.sizes = {6, 10};
  opt.alphas = {0.1, 0.5};
  opt.seeds = {1, 2};
  opt.oracle_max_nodes = 40;
  opt.timeout_s = 60.0;
  const auto rep = bench::run_sweep(opt);
  // Two solvers per (size, seed, alpha).
  ASSERT_EQ(rep.rows.size(), 2u * 2u * 2u * 2u);
  for (const auto& row : rep.rows) {
    EXPECT_TRUE(row.budget_ok);
    EXPECT_FALSE(row.timed_out);
    EXPECT_NEAR(row.budget_s, (1.0 + row.alpha) * row.t_min_s, 1e-9);
    EXPECT_LE(row.time_s, row.budget_s + 1e-9);
    if (row.rows == 6) EXPECT_EQ(row.reference, "oracle");
    if (row.gap) EXPECT_LE(std::abs(*row.gap), 1e-3);
  }
  const std::string csv = rep.to_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')).find("rows,cols,seed,alpha,solver"), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 17);
  EXPECT_NE(rep.runtime_table().find("apulse"), std::string::npos);
  EXPECT_NE(rep.optimality_table().find("baseline"), std::string::npos);
}

TEST(RunSweep, MoreSlackMeansMoreSearch) {
  std::uint64_t tight = 0, loose = 0;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto inst = bench::generate_instance(32, 32, 3, seed);
    tight += solve(inst.graph, inst.start, inst.goal, inst.budget(0.1)).stats.labels_expanded;
    loose += solve(inst.graph, inst.start, inst.goal, inst.budget(0.5)).stats.labels_expanded;
  }
  EXPECT_GT(loose, tight);
}
