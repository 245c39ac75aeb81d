#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "argus/cost_graph.hpp"
#include "argus/errors.hpp"
#include "argus/terrain.hpp"
#include "test_support.hpp"

using namespace argus;

namespace {

std::size_t count_edges_brute(const CostGraph& g) {
  std::set<std::pair<NodeId, NodeId>> edges;
  for (std::size_t u = 0; u < g.node_count(); ++u) {
    for (const Arc& a : g.arcs(static_cast<NodeId>(u))) {
      edges.insert({std::min<NodeId>(u, a.to), std::max<NodeId>(u, a.to)});
    }
  }
  return edges.size();
}

}  // namespace

TEST(DeriveSlope, FlatIsZeroInEveryDirection) {
  const auto grid = TerrainGrid::flat(3, 3);
  for (int dr = -1; dr <= 1; ++dr)
    for (int dc = -1; dc <= 1; ++dc)
      if (dr != 0 || dc != 0) EXPECT_EQ(derive_slope(grid, {1, 1}, {1 + dr, 1 + dc}), 0.0);
}

TEST(DeriveSlope, SignedRiseOverRun) {
  auto grid = TerrainGrid::flat(1, 2);
  grid.elevation(0, 1) = 5.0;
  EXPECT_DOUBLE_EQ(derive_slope(grid, {0, 0}, {0, 1}), 0.2);
  EXPECT_DOUBLE_EQ(derive_slope(grid, {0, 1}, {0, 0}), -0.2);
}

TEST(DeriveSlope, NonAdjacentIsDomainError) {
  const auto grid = TerrainGrid::flat(3, 3);
  EXPECT_THROW(derive_slope(grid, {0, 0}, {0, 2}), DomainError);
  EXPECT_THROW(derive_slope(grid, {0, 0}, {0, 0}), DomainError);
}

TEST(EdgeTime, FlatOrthogonalAndDiagonal) {
  const auto grid = TerrainGrid::flat(2, 2);
  const auto m = testkit::uniform_mobility(5.0);
  EXPECT_NEAR(*edge_time(grid, m, {0, 0}, {0, 1}), 5.0, 1e-12);
  EXPECT_NEAR(*edge_time(grid, m, {0, 0}, {1, 1}), 7.0710678118654755, 1e-9);
}

TEST(EdgeTime, SpeedComesFromDestinationCell) {
  auto grid = TerrainGrid::flat(1, 2);
  grid.land_cover(0, 1) = 1;  // road, 8 m/s
  const auto m = MobilityModel::defaults();
  EXPECT_NEAR(*edge_time(grid, m, {0, 0}, {0, 1}), 25.0 / 8.0, 1e-12);
  EXPECT_NEAR(*edge_time(grid, m, {0, 1}, {0, 0}), 25.0 / 5.0, 1e-12);
}

TEST(EdgeTime, TooSteepIsImpassable) {
  auto grid = TerrainGrid::flat(1, 2);
  grid.elevation(0, 1) = 13.0;  // 0.52
  EXPECT_FALSE(edge_time(grid, MobilityModel::defaults(), {0, 0}, {0, 1}).has_value());
  EXPECT_FALSE(edge_time(grid, MobilityModel::defaults(), {0, 1}, {0, 0}).has_value());
}

TEST(EdgeTime, MonotoneInSlope) {
  const auto m = MobilityModel::defaults();
  double prev_up = 0.0, prev_down = 0.0;
  for (int k = 0; k <= 12; ++k) {
    auto grid = TerrainGrid::flat(1, 2);
    grid.elevation(0, 1) = k;  // up to 0.48
    const double up = *edge_time(grid, m, {0, 0}, {0, 1});
    const double down = *edge_time(grid, m, {0, 1}, {0, 0});
    EXPECT_GE(up, prev_up);
    EXPECT_GE(down, prev_down);
    prev_up = up;
    prev_down = down;
  }
}

TEST(SlopeFactorTable, ValidatesShape) {
  EXPECT_THROW(SlopeFactorTable(std::vector<std::pair<double, double>>{}), ValidationError);
  EXPECT_THROW(SlopeFactorTable({{0.1, 1.0}}), ValidationError);
  EXPECT_THROW(SlopeFactorTable({{0.0, 0.9}}), ValidationError);
  EXPECT_THROW(SlopeFactorTable({{0.0, 1.0}, {0.2, 1.2}}), ValidationError);
  EXPECT_THROW(SlopeFactorTable({{0.0, 1.0}, {0.1, 0.5}, {0.2, 0.7}}), ValidationError);
  EXPECT_THROW(SlopeFactorTable({{-0.2, 0.9}, {-0.1, 0.5}, {0.0, 1.0}}), ValidationError);
}

TEST(SlopeFactorTable, MirroredWhenOnlyAscentsGiven) {
  const SlopeFactorTable t({{0.0, 1.0}, {0.4, 0.2}});
  EXPECT_DOUBLE_EQ(t(0.0), 1.0);
  EXPECT_DOUBLE_EQ(t(0.2), 0.6);
  EXPECT_DOUBLE_EQ(t(-0.2), 0.6);
  EXPECT_DOUBLE_EQ(t(0.9), 0.2);
}

TEST(BuildGraph, ThreeByThreeFree) {
  const auto g = build_graph(TerrainGrid::flat(3, 3), MobilityModel::defaults());
  EXPECT_EQ(g.node_count(), 9u);
  EXPECT_EQ(g.edge_count(), 20u);
  EXPECT_EQ(count_edges_brute(g), 20u);
}

TEST(BuildGraph, CentreObstacleKeepsRingDiagonals) {
  auto grid = TerrainGrid::flat(3, 3);
  grid.obstacle(1, 1) = 1;
  const auto g = build_graph(grid, MobilityModel::defaults());
  EXPECT_EQ(g.node_count(), 8u);
  std::size_t orth = 0, diag = 0;
  for (std::size_t u = 0; u < g.node_count(); ++u) {
    for (const Arc& a : g.arcs(static_cast<NodeId>(u))) {
      const Cell cu = g.cell_of(static_cast<NodeId>(u)), cv = g.cell_of(a.to);
      (cu.row != cv.row && cu.col != cv.col ? diag : orth) += 1;
    }
  }
  EXPECT_EQ(orth / 2, 8u);
  EXPECT_EQ(diag / 2, 4u);
  EXPECT_EQ(g.edge_count(), 12u);
  EXPECT_EQ(g.node_at({1, 1}), kNoNode);
}

TEST(BuildGraph, SingleCell) {
  const auto g = build_graph(TerrainGrid::flat(1, 1), MobilityModel::defaults());
  EXPECT_EQ(g.node_count(), 1u);
  EXPECT_EQ(g.edge_count(), 0u);
}

TEST(BuildGraph, FullyObstructedIsEmptyGraphError) {
  auto grid = TerrainGrid::flat(2, 2);
  for (auto& v : grid.obstacle.data()) v = 1;
  EXPECT_THROW(build_graph(grid, MobilityModel::defaults()), EmptyGraphError);
}

TEST(BuildGraph, NodeSpacingIsCellSize) {
  const auto g = build_graph(TerrainGrid::flat(2, 2, 25.0), MobilityModel::defaults());
  const NodeId a = g.node_at({0, 0}), b = g.node_at({0, 1});
  EXPECT_DOUBLE_EQ(g.find_arc(a, b)->distance, 25.0);
  EXPECT_DOUBLE_EQ(distance(g.centroid(a), g.centroid(b)), 25.0);
}

TEST(BuildGraph, SteepEdgesOmittedBothWays) {
  auto grid = TerrainGrid::flat(1, 3);
  grid.elevation(0, 2) = 20.0;
  const auto g = build_graph(grid, MobilityModel::defaults());
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_EQ(g.find_arc(g.node_at({0, 1}), g.node_at({0, 2})), nullptr);
  EXPECT_EQ(g.find_arc(g.node_at({0, 2}), g.node_at({0, 1})), nullptr);
}

TEST(BuildGraph, UnknownLandCoverRejected) {
  auto grid = TerrainGrid::flat(2, 2);
  grid.land_cover(1, 1) = 9;
  EXPECT_THROW(build_graph(grid, MobilityModel::defaults()), ValidationError);
}

TEST(GraphProperties, RandomGridsAreSymmetricAndObstacleSafe) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto rg = testkit::random_graph(7, 9, seed, 0.2);
    const auto& g = rg.graph;
    for (std::size_t u = 0; u < g.node_count(); ++u) {
      const Cell cu = g.cell_of(static_cast<NodeId>(u));
      ASSERT_FALSE(rg.grid.is_obstacle(cu));
      for (const Arc& a : g.arcs(static_cast<NodeId>(u))) {
        const Cell cv = g.cell_of(a.to);
        const Arc* back = g.find_arc(a.to, static_cast<NodeId>(u));
        ASSERT_NE(back, nullptr);
        EXPECT_DOUBLE_EQ(back->distance, a.distance);
        EXPECT_DOUBLE_EQ(back->time, a.time_back);
        EXPECT_GT(a.time, 0.0);
        EXPECT_TRUE(std::isfinite(a.time));
        EXPECT_FALSE(rg.grid.is_obstacle(cv));
        if (cu.row != cv.row && cu.col != cv.col) {
          EXPECT_FALSE(rg.grid.is_obstacle({cu.row, cv.col}) && rg.grid.is_obstacle({cv.row, cu.col}));
        }
        const auto t = edge_time(rg.grid, MobilityModel::defaults(), cu, cv);
        ASSERT_TRUE(t.has_value());
        EXPECT_DOUBLE_EQ(*t, a.time);
      }
    }
  }
}

TEST(GraphProperties, FlatUniformDiagonalRatio) {
  const auto g = build_graph(TerrainGrid::flat(4, 4), MobilityModel::defaults());
  const NodeId c = g.node_at({1, 1});
  const double orth = g.find_arc(c, g.node_at({1, 2}))->time;
  const double diag = g.find_arc(c, g.node_at({2, 2}))->time;
  EXPECT_NEAR(diag / orth, std::sqrt(2.0), 1e-9);
}

TEST(TerrainGrid, ValidateCatchesShapeMismatch) {
  auto grid = TerrainGrid::flat(4, 4);
  grid.elevation = Raster<double>(4, 3);
  EXPECT_THROW(grid.validate(), ShapeError);
  EXPECT_THROW(Raster<double>(4, 4, std::vector<double>(15)), ShapeError);
}

TEST(MobilityModel, ValidateRejectsBadSpeeds) {
  auto m = MobilityModel::defaults();
  m.class_speed[0] = 0.0;
  EXPECT_THROW(m.validate(), ValidationError);
}
