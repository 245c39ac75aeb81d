#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "argus/errors.hpp"
#include "argus/io.hpp"
#include "argus/planner.hpp"
#include "test_support.hpp"

using namespace argus;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "argus_test_io";
  fs::create_directories(dir);
  return dir / name;
}

fs::path write(const std::string& name, const std::string& text) {
  const auto p = scratch(name);
  std::ofstream(p) << text;
  return p;
}

const char* kGrid4x4 = R"({
  "rows": 4, "cols": 4, "cell_size_m": 25.0, "origin": [100.0, 200.0],
  "elevation": [0,0,0,0, 1,1,1,1, 2,2,2,2, 3,3,3,3],
  "land_cover": [0,0,1,1, 0,0,1,1, 2,2,3,3, 2,2,3,3],
  "obstacles": [0,0,0,0, 0,1,0,0, 0,0,0,0, 0,0,0,0]
})";

}  // namespace

TEST(LoadGrid, FourByFourWithObstacle) {
  const auto grid = io::load_grid(write("grid.json", kGrid4x4));
  EXPECT_EQ(grid.rows(), 4);
  EXPECT_EQ(grid.cols(), 4);
  EXPECT_TRUE(grid.is_obstacle({1, 1}));
  EXPECT_EQ(grid.land_cover(2, 3), 3);
  EXPECT_DOUBLE_EQ(grid.elevation(3, 0), 3.0);
  EXPECT_DOUBLE_EQ(grid.geometry.origin.x, 100.0);
  const auto g = build_graph(grid, MobilityModel::defaults());
  EXPECT_EQ(g.node_count(), 15u);
}

TEST(LoadGrid, WrongValueCountIsShapeError) {
  std::string text = kGrid4x4;
  text.replace(text.find("3,3,3,3]"), 8, "3,3,3]");
  EXPECT_THROW(io::load_grid(write("short.json", text)), ShapeError);
}

TEST(LoadGrid, SyntaxErrorNamesLine) {
  const auto p = write("broken.json", "{\n  \"rows\": 4,\n  \"cols\": ,\n}\n");
  try {
    io::load_grid(p);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(e.where().find(":3"), std::string::npos) << e.where();
  }
}

TEST(LoadGrid, BadObstacleFlagNamesField) {
  std::string text = kGrid4x4;
  text.replace(text.find("0,1,0,0"), 7, "0,7,0,0");
  try {
    io::load_grid(write("flag.json", text));
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field(), "obstacles[5]");
  }
}

TEST(LoadGrid, RoundTrip) {
  auto grid = io::terrain_from_json(io::parse_json(kGrid4x4));
  grid.geo_anchor = GeoAnchor{39.5, -8.3};
  const auto back = io::terrain_from_json(io::parse_json(io::dump(io::to_json(grid))));
  EXPECT_EQ(back.elevation, grid.elevation);
  EXPECT_EQ(back.land_cover, grid.land_cover);
  EXPECT_EQ(back.obstacle, grid.obstacle);
  ASSERT_TRUE(back.geo_anchor.has_value());
  EXPECT_DOUBLE_EQ(back.geo_anchor->lat_deg, 39.5);
}

TEST(LoadMission, MinimalFillsDefaults) {
  const auto m = io::load_mission(write("m.json", R"({"start":[0,0],"goal":[3,3],"mode":{"type":"Balanced","alpha":0.4}})"));
  EXPECT_EQ(m.start, (Cell{0, 0}));
  EXPECT_EQ(m.goal, (Cell{3, 3}));
  EXPECT_DOUBLE_EQ(std::get<Balanced>(m.mode).alpha, 0.4);
  EXPECT_DOUBLE_EQ(m.formation_width_m, 0.0);
  EXPECT_DOUBLE_EQ(m.replan_slack, 0.25);
}

TEST(LoadMission, FieldLevelErrors) {
  auto field_of = [](const std::string& text) {
    try {
      io::mission_from_json(io::parse_json(text));
    } catch (const ValidationError& e) {
      return e.field();
    }
    return std::string("<none>");
  };
  EXPECT_EQ(field_of(R"({"start":[0,0],"goal":[3,3],"mode":{"type":"SafeWithinTime","budget_s":-10}})"),
            "mode.budget_s");
  EXPECT_EQ(field_of(R"({"start":[0,0],"goal":[3,3],"mode":{"type":"Scenic"}})"), "mode.type");
  EXPECT_EQ(field_of(R"({"start":[0,0],"goal":[3,3],"mode":{"type":"Balanced","alpha":2}})"), "mode.alpha");
  EXPECT_EQ(field_of(R"({"start":[0,0],"goal":[3,3],"mode":{"type":"FastWithinRisk","max_risk":1.5}})"),
            "mode.max_risk");
  EXPECT_EQ(field_of(R"({"goal":[3,3],"mode":{"type":"Balanced","alpha":0.5}})"), "start");
  EXPECT_EQ(field_of(R"({"start":[0],"goal":[3,3],"mode":{"type":"Balanced","alpha":0.5}})"), "start");
}

TEST(MissionJson, RoundTripsEveryMode) {
  for (const MissionMode& mode : std::vector<MissionMode>{Balanced{0.3}, FastWithinRisk{0.2}, SafeWithinTime{321.5}}) {
    MissionRequest r;
    r.start = {1, 2};
    r.goal = {5, 6};
    r.mode = mode;
    r.formation_width_m = 40.0;
    r.replan_slack = 0.6;
    const auto back = io::mission_from_json(io::parse_json(io::dump(io::to_json(r))));
    EXPECT_EQ(back.start, r.start);
    EXPECT_EQ(back.goal, r.goal);
    EXPECT_EQ(back.mode.index(), r.mode.index());
    EXPECT_EQ(mode_name(back.mode), mode_name(r.mode));
    EXPECT_DOUBLE_EQ(back.formation_width_m, 40.0);
    EXPECT_DOUBLE_EQ(back.replan_slack, 0.6);
  }
}

TEST(ResultJson, SavedResultReloadsWithIdenticalKpis) {
  const std::vector<ThreatSpec> threats{ThreatSpec::dirac("T", {5, 6}, {120.0, 0.25, 2.0}, 0.8)};
  const auto sc = Scenario::create(TerrainGrid::flat(12, 14), MobilityModel::defaults(), threats);
  MissionRequest r;
  r.start = {0, 0};
  r.goal = {11, 13};
  r.mode = SafeWithinTime{400.0};
  const auto res = plan_mission(sc, r);
  const auto p = scratch("result.json");
  io::save_result(p, res);
  const auto back = io::load_result(p);
  EXPECT_EQ(back.path, res.path);
  EXPECT_NEAR(back.total_time_s, res.total_time_s, 1e-9);
  EXPECT_NEAR(back.total_distance_m, res.total_distance_m, 1e-9);
  EXPECT_NEAR(back.total_log_risk, res.total_log_risk, 1e-9);
  EXPECT_NEAR(back.survival_probability, res.survival_probability, 1e-9);
  EXPECT_NEAR(back.max_cell_risk, res.max_cell_risk, 1e-9);
  EXPECT_NEAR(back.exposure.medium_m, res.exposure.medium_m, 1e-9);
  ASSERT_EQ(back.closest_approach.size(), 1u);
  EXPECT_NEAR(back.closest_approach[0].distance_m, res.closest_approach[0].distance_m, 1e-9);
  EXPECT_EQ(back.terrain_composition_m, res.terrain_composition_m);
  EXPECT_EQ(mode_name(back.request.mode), "SafeWithinTime");
  // Same result, same bytes.
  EXPECT_EQ(io::dump(io::result_to_json(back)), io::dump(io::result_to_json(res)));
}

TEST(ThreatJson, RoundTrip) {
  ThreatSpec t;
  t.id = "SAM";
  t.detection = {300.0, 0.2, 1.7};
  t.impact = 0.65;
  t.prior = {{{1, 2}, 0.25}, {{3, 4}, 0.75}};
  const auto back = io::threats_from_json(io::parse_json(io::dump(io::threats_to_json(std::vector<ThreatSpec>{t}))));
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].id, "SAM");
  EXPECT_DOUBLE_EQ(back[0].detection.range_m, 300.0);
  EXPECT_DOUBLE_EQ(back[0].detection.decay_exponent, 1.7);
  EXPECT_DOUBLE_EQ(back[0].impact, 0.65);
  ASSERT_EQ(back[0].prior.size(), 2u);
  EXPECT_EQ(back[0].prior[1].cell, (Cell{3, 4}));
  EXPECT_DOUBLE_EQ(back[0].prior[1].weight, 0.75);
}

TEST(ThreatJson, OutOfRangeNamesThreat) {
  try {
    io::threats_from_json(io::parse_json(
        R"([{"id":"a","R_m":100,"phi":0.5,"p":1,"prior":{"cells":[[0,0,1]]}},
            {"id":"b","R_m":-5,"phi":0.5,"p":1,"prior":{"cells":[[0,0,1]]}}])"));
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(e.field().find("threats[1]"), std::string::npos) << e.field();
  }
}

TEST(EventJson, RoundTrip) {
  DynamicEvent e;
  e.current_position_index = 7;
  e.timestamp_s = 12.5;
  e.new_threats = {ThreatSpec::dirac("POP", {3, 3}, {150.0, 0.3, 2.0})};
  const auto back = io::event_from_json(io::parse_json(io::dump(io::to_json(e))));
  EXPECT_EQ(back.current_position_index, 7u);
  EXPECT_DOUBLE_EQ(back.timestamp_s, 12.5);
  ASSERT_EQ(back.new_threats.size(), 1u);
  EXPECT_EQ(back.new_threats[0].prior[0].cell, (Cell{3, 3}));
  EXPECT_THROW(io::event_from_json(io::parse_json(R"({"at_index":-1,"threats":[]})")), ValidationError);
}

TEST(MobilityJson, RoundTrip) {
  const auto m = MobilityModel::defaults();
  const auto back = io::mobility_from_json(io::parse_json(io::dump(io::to_json(m))));
  EXPECT_EQ(back.class_speed, m.class_speed);
  EXPECT_DOUBLE_EQ(back.max_slope, m.max_slope);
  for (double s : {-0.4, -0.1, 0.0, 0.15, 0.3})
    EXPECT_DOUBLE_EQ(back.slope_factor(s), m.slope_factor(s));
}

TEST(Dump, IsCanonical) {
  const auto j = io::parse_json(R"({"b":1,"a":[1,2]})");
  EXPECT_EQ(io::dump(j), "{\n  \"a\": [\n    1,\n    2\n  ],\n  \"b\": 1\n}\n");
}
