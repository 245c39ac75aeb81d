#include "argus/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace argus::io {

namespace {

std::string join(const std::string& ctx, const std::string& key) { return ctx.empty() ? key : ctx + "." + key; }

const json& require(const json& j, const std::string& key, const std::string& ctx) {
  if (!j.is_object()) throw ValidationError(ctx.empty() ? "<root>" : ctx, "expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError(join(ctx, key), "missing required field");
  return *it;
}

double as_number(const json& j, const std::string& field) {
  if (!j.is_number()) throw ValidationError(field, "expected a number");
  return j.get<double>();
}

long long as_integer(const json& j, const std::string& field) {
  if (!j.is_number_integer()) throw ValidationError(field, "expected an integer");
  return j.get<long long>();
}

double number_field(const json& j, const std::string& key, const std::string& ctx) {
  return as_number(require(j, key, ctx), join(ctx, key));
}

double number_or(const json& j, const std::string& key, const std::string& ctx, double fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  return as_number(*it, join(ctx, key));
}

bool bool_or(const json& j, const std::string& key, bool fallback) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_boolean()) return fallback;
  return it->get<bool>();
}

Cell cell_from(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2) throw ValidationError(field, "expected [row, col]");
  return {static_cast<int>(as_integer(j[0], field + "[0]")), static_cast<int>(as_integer(j[1], field + "[1]"))};
}

json cell_to(Cell c) { return json::array({c.row, c.col}); }

template <class T, class Conv>
std::vector<T> array_of(const json& j, const std::string& field, Conv conv) {
  if (!j.is_array()) throw ValidationError(field, "expected an array");
  std::vector<T> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(conv(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace

json parse_json(std::string_view text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t pos = std::min<std::size_t>(e.byte, text.size());
    std::size_t line = 1;
    for (std::size_t i = 0; i + 1 < pos; ++i) {
      if (text[i] == '\n') ++line;
    }
    throw ParseError(source + ":" + std::to_string(line), e.what());
  }
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path.string(), "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path.string());
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError(path.string(), "cannot open file for writing");
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------- terrain

TerrainGrid terrain_from_json(const json& j) {
  TerrainGrid grid;
  const int rows = static_cast<int>(as_integer(require(j, "rows", ""), "rows"));
  const int cols = static_cast<int>(as_integer(require(j, "cols", ""), "cols"));
  if (rows <= 0 || cols <= 0) throw ValidationError("rows/cols", "must be positive");
  grid.geometry.rows = rows;
  grid.geometry.cols = cols;
  grid.geometry.cell_size = number_or(j, "cell_size_m", "", 25.0);
  if (auto it = j.find("origin"); it != j.end()) {
    if (!it->is_array() || it->size() != 2) throw ValidationError("origin", "expected [x, y]");
    grid.geometry.origin = {as_number((*it)[0], "origin[0]"), as_number((*it)[1], "origin[1]")};
  }
  auto numbers = [](const json& v, const std::string& f) { return as_number(v, f); };
  grid.elevation = Raster<double>(rows, cols, array_of<double>(require(j, "elevation", ""), "elevation", numbers));
  grid.land_cover = Raster<int>(rows, cols, array_of<int>(require(j, "land_cover", ""), "land_cover",
                                                          [](const json& v, const std::string& f) {
                                                            return static_cast<int>(as_integer(v, f));
                                                          }));
  grid.obstacle = Raster<std::uint8_t>(
      rows, cols, array_of<std::uint8_t>(require(j, "obstacles", ""), "obstacles", [](const json& v, const std::string& f) {
        const auto b = as_integer(v, f);
        if (b != 0 && b != 1) throw ValidationError(f, "obstacle flags must be 0 or 1");
        return static_cast<std::uint8_t>(b);
      }));
  if (auto it = j.find("geo_anchor"); it != j.end() && !it->is_null()) {
    if (!it->is_array() || it->size() != 2) throw ValidationError("geo_anchor", "expected [lat, lon]");
    grid.geo_anchor = GeoAnchor{as_number((*it)[0], "geo_anchor[0]"), as_number((*it)[1], "geo_anchor[1]")};
  }
  grid.validate();
  return grid;
}

json to_json(const TerrainGrid& grid) {
  json j;
  j["rows"] = grid.rows();
  j["cols"] = grid.cols();
  j["cell_size_m"] = grid.cell_size();
  j["origin"] = json::array({grid.geometry.origin.x, grid.geometry.origin.y});
  j["elevation"] = grid.elevation.data();
  j["land_cover"] = grid.land_cover.data();
  json obstacles = json::array();
  for (std::uint8_t b : grid.obstacle.values()) obstacles.push_back(static_cast<int>(b));
  j["obstacles"] = std::move(obstacles);
  if (grid.geo_anchor) j["geo_anchor"] = json::array({grid.geo_anchor->lat_deg, grid.geo_anchor->lon_deg});
  return j;
}

TerrainGrid load_grid(const std::filesystem::path& path) { return terrain_from_json(read_json_file(path)); }

// ---------------------------------------------------------------- mobility

MobilityModel mobility_from_json(const json& j) {
  MobilityModel m = MobilityModel::defaults();
  const json& speeds = require(j, "class_speed", "");
  if (!speeds.is_object()) throw ValidationError("class_speed", "expected an object of class id -> m/s");
  m.class_speed.clear();
  for (auto it = speeds.begin(); it != speeds.end(); ++it) {
    int cls = 0;
    try {
      std::size_t used = 0;
      cls = std::stoi(it.key(), &used);
      if (used != it.key().size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ValidationError("class_speed." + it.key(), "class id must be an integer");
    }
    m.class_speed[cls] = as_number(it.value(), "class_speed." + it.key());
  }
  if (auto it = j.find("slope_factor"); it != j.end()) {
    auto points = array_of<std::pair<double, double>>(*it, "slope_factor", [](const json& v, const std::string& f) {
      if (!v.is_array() || v.size() != 2) throw ValidationError(f, "expected [slope, factor]");
      return std::pair{as_number(v[0], f + "[0]"), as_number(v[1], f + "[1]")};
    });
    m.slope_factor = SlopeFactorTable(std::move(points));
  }
  m.max_slope = number_or(j, "max_slope", "", m.max_slope);
  if (auto it = j.find("ascent_window"); it != j.end()) {
    m.ascent_window = static_cast<int>(as_integer(*it, "ascent_window"));
  }
  m.ascent_threshold = number_or(j, "ascent_threshold", "", m.ascent_threshold);
  m.validate();
  return m;
}

json to_json(const MobilityModel& m) {
  json speeds = json::object();
  for (const auto& [cls, v] : m.class_speed) speeds[std::to_string(cls)] = v;
  json points = json::array();
  for (const auto& [s, f] : m.slope_factor.breakpoints()) points.push_back(json::array({s, f}));
  return json{{"class_speed", speeds},
              {"slope_factor", points},
              {"max_slope", m.max_slope},
              {"ascent_window", m.ascent_window},
              {"ascent_threshold", m.ascent_threshold}};
}

MobilityModel load_mobility(const std::filesystem::path& path) { return mobility_from_json(read_json_file(path)); }

// ---------------------------------------------------------------- threats

ThreatSpec threat_from_json(const json& j, const std::string& where) {
  ThreatSpec t;
  const json& id = require(j, "id", where);
  t.id = id.is_string() ? id.get<std::string>() : id.dump();
  t.detection.range_m = number_field(j, "R_m", where);
  t.detection.plateau_fraction = number_field(j, "phi", where);
  t.detection.decay_exponent = number_field(j, "p", where);
  try {
    t.detection.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(join(where, e.field()), "out of range");
  }
  if (auto it = j.find("impact"); it != j.end() && !it->is_null()) {
    if (it->is_array()) {
      auto values = array_of<double>(*it, join(where, "impact"),
                                     [](const json& v, const std::string& f) { return as_number(v, f); });
      // Shape is checked against the grid at normalization; keep it flat for now.
      t.impact_raster = Raster<double>(1, static_cast<int>(values.size()), std::move(values));
    } else {
      t.impact = as_number(*it, join(where, "impact"));
      if (!(t.impact >= 0.0 && t.impact <= 1.0)) throw ValidationError(join(where, "impact"), "must lie in [0,1]");
    }
  }
  const json& prior = require(j, "prior", where);
  const std::string pctx = join(where, "prior");
  t.prior = array_of<PriorCell>(require(prior, "cells", pctx), join(pctx, "cells"),
                                [](const json& v, const std::string& f) {
                                  if (!v.is_array() || v.size() != 3) throw ValidationError(f, "expected [r, c, weight]");
                                  return PriorCell{{static_cast<int>(as_integer(v[0], f + "[0]")),
                                                    static_cast<int>(as_integer(v[1], f + "[1]"))},
                                                   as_number(v[2], f + "[2]")};
                                });
  return t;
}

std::vector<ThreatSpec> threats_from_json(const json& j) {
  const json& list = j.is_object() && j.contains("threats") ? j["threats"] : j;
  if (!list.is_array()) throw ValidationError("threats", "expected an array of threats");
  std::vector<ThreatSpec> out;
  for (std::size_t i = 0; i < list.size(); ++i) out.push_back(threat_from_json(list[i], "threats[" + std::to_string(i) + "]"));
  return out;
}

json to_json(const ThreatSpec& t) {
  json cells = json::array();
  for (const PriorCell& p : t.prior) cells.push_back(json::array({p.cell.row, p.cell.col, p.weight}));
  json j{{"id", t.id}, {"R_m", t.detection.range_m}, {"phi", t.detection.plateau_fraction},
         {"p", t.detection.decay_exponent}, {"prior", json{{"cells", cells}}}};
  if (t.impact_raster) {
    j["impact"] = t.impact_raster->data();
  } else {
    j["impact"] = t.impact;
  }
  return j;
}

json threats_to_json(std::span<const ThreatSpec> threats) {
  json out = json::array();
  for (const ThreatSpec& t : threats) out.push_back(to_json(t));
  return out;
}

std::vector<ThreatSpec> load_threats(const std::filesystem::path& path) {
  return threats_from_json(read_json_file(path));
}

// ---------------------------------------------------------------- mission

namespace {

MissionMode mode_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("mode", "expected an object with a 'type'");
  const json& type = require(j, "type", "mode");
  if (!type.is_string()) throw ValidationError("mode.type", "expected a string");
  const auto name = type.get<std::string>();
  if (name == "Balanced") return Balanced{number_field(j, "alpha", "mode")};
  if (name == "FastWithinRisk") return FastWithinRisk{number_field(j, "max_risk", "mode")};
  if (name == "SafeWithinTime") return SafeWithinTime{number_field(j, "budget_s", "mode")};
  throw ValidationError("mode.type", "unknown mode '" + name + "'");
}

json mode_to_json(const MissionMode& mode) {
  json j{{"type", mode_name(mode)}};
  if (const auto* b = std::get_if<Balanced>(&mode)) j["alpha"] = b->alpha;
  if (const auto* f = std::get_if<FastWithinRisk>(&mode)) j["max_risk"] = f->max_risk;
  if (const auto* s = std::get_if<SafeWithinTime>(&mode)) j["budget_s"] = s->budget_s;
  return j;
}

}  // namespace

MissionRequest mission_from_json(const json& j) {
  MissionRequest req;
  req.start = cell_from(require(j, "start", ""), "start");
  req.goal = cell_from(require(j, "goal", ""), "goal");
  req.mode = mode_from_json(require(j, "mode", ""));
  req.formation_width_m = number_or(j, "formation_width_m", "", 0.0);
  req.replan_slack = number_or(j, "replan_slack", "", 0.25);
  req.validate();
  return req;
}

json to_json(const MissionRequest& req) {
  return json{{"start", cell_to(req.start)},
              {"goal", cell_to(req.goal)},
              {"mode", mode_to_json(req.mode)},
              {"formation_width_m", req.formation_width_m},
              {"replan_slack", req.replan_slack}};
}

MissionRequest load_mission(const std::filesystem::path& path) { return mission_from_json(read_json_file(path)); }

// ---------------------------------------------------------------- results

json to_json(const SolverStats& s, bool include_timings) {
  json j{{"labels_pushed", s.labels_pushed},
         {"labels_popped", s.labels_popped},
         {"labels_expanded", s.labels_expanded},
         {"pruned_feasibility", s.pruned_feasibility},
         {"pruned_optimality", s.pruned_optimality},
         {"pruned_dominance", s.pruned_dominance},
         {"pruned_ascent", s.pruned_ascent},
         {"bucket_entries", s.bucket_entries},
         {"incumbent_updates", s.incumbent_updates},
         {"bucket_width_s", s.bucket_width_s},
         {"limit_hit", s.limit_hit}};
  if (include_timings) j["wall_time_s"] = s.wall_time_s;
  return j;
}

json result_to_json(const PlanResult& r, bool include_timings) {
  json path = json::array();
  for (const Cell& c : r.path) path.push_back(cell_to(c));
  json cpa = json::array();
  for (const ThreatApproach& a : r.closest_approach) {
    cpa.push_back(json{{"threat_id", a.threat_id}, {"distance_m", a.distance_m}, {"cell", cell_to(a.closest_cell)}});
  }
  json terrain = json::object();
  for (const auto& [cls, d] : r.terrain_composition_m) terrain[std::to_string(cls)] = d;
  json j;
  j["request"] = to_json(r.request);
  j["kpis"] = json{{"total_distance_m", r.total_distance_m},
                   {"total_time_s", r.total_time_s},
                   {"total_log_risk", r.total_log_risk},
                   {"survival_probability", r.survival_probability},
                   {"max_cell_risk", r.max_cell_risk}};
  j["risk_exposure_m"] = json{{"low", r.exposure.low_m}, {"medium", r.exposure.medium_m}, {"high", r.exposure.high_m}};
  j["terrain_composition_m"] = terrain;
  j["closest_approach"] = cpa;
  j["fallback_used"] = r.fallback_used;
  j["effective_max_risk"] = r.effective_max_risk ? json(*r.effective_max_risk) : json(nullptr);
  j["anytime"] = r.anytime;
  j["solver_stats"] = to_json(r.stats, include_timings);
  j["path"] = path;
  return j;
}

PlanResult result_from_json(const json& j) {
  PlanResult r;
  r.request = mission_from_json(require(j, "request", ""));
  const json& k = require(j, "kpis", "");
  r.total_distance_m = number_field(k, "total_distance_m", "kpis");
  r.total_time_s = number_field(k, "total_time_s", "kpis");
  r.total_log_risk = number_field(k, "total_log_risk", "kpis");
  r.survival_probability = number_field(k, "survival_probability", "kpis");
  r.max_cell_risk = number_or(k, "max_cell_risk", "kpis", 0.0);
  if (auto it = j.find("risk_exposure_m"); it != j.end()) {
    r.exposure = {number_or(*it, "low", "risk_exposure_m", 0.0), number_or(*it, "medium", "risk_exposure_m", 0.0),
                  number_or(*it, "high", "risk_exposure_m", 0.0)};
  }
  if (auto it = j.find("terrain_composition_m"); it != j.end() && it->is_object()) {
    for (auto t = it->begin(); t != it->end(); ++t) {
      r.terrain_composition_m[std::stoi(t.key())] = as_number(t.value(), "terrain_composition_m." + t.key());
    }
  }
  if (auto it = j.find("closest_approach"); it != j.end() && it->is_array()) {
    for (std::size_t i = 0; i < it->size(); ++i) {
      const json& a = (*it)[i];
      const std::string ctx = "closest_approach[" + std::to_string(i) + "]";
      r.closest_approach.push_back(ThreatApproach{require(a, "threat_id", ctx).get<std::string>(),
                                                  number_field(a, "distance_m", ctx),
                                                  cell_from(require(a, "cell", ctx), ctx + ".cell")});
    }
  }
  r.fallback_used = bool_or(j, "fallback_used", false);
  if (auto it = j.find("effective_max_risk"); it != j.end() && !it->is_null()) {
    r.effective_max_risk = as_number(*it, "effective_max_risk");
  }
  r.anytime = bool_or(j, "anytime", false);
  if (auto it = j.find("solver_stats"); it != j.end() && it->is_object()) {
    const json& s = *it;
    auto count = [&](const char* key) { return s.value(key, std::uint64_t{0}); };
    r.stats.labels_pushed = count("labels_pushed");
    r.stats.labels_popped = count("labels_popped");
    r.stats.labels_expanded = count("labels_expanded");
    r.stats.pruned_feasibility = count("pruned_feasibility");
    r.stats.pruned_optimality = count("pruned_optimality");
    r.stats.pruned_dominance = count("pruned_dominance");
    r.stats.pruned_ascent = count("pruned_ascent");
    r.stats.bucket_entries = count("bucket_entries");
    r.stats.incumbent_updates = count("incumbent_updates");
    r.stats.bucket_width_s = s.value("bucket_width_s", 0.0);
    r.stats.wall_time_s = s.value("wall_time_s", 0.0);
    r.stats.limit_hit = s.value("limit_hit", false);
  }
  r.path = array_of<Cell>(require(j, "path", ""), "path", [](const json& v, const std::string& f) { return cell_from(v, f); });
  return r;
}

void save_result(const std::filesystem::path& path, const PlanResult& result, bool include_timings) {
  write_text_file(path, dump(result_to_json(result, include_timings)));
}

PlanResult load_result(const std::filesystem::path& path) { return result_from_json(read_json_file(path)); }

// ---------------------------------------------------------------- events

DynamicEvent event_from_json(const json& j) {
  DynamicEvent e;
  const auto at = as_integer(require(j, "at_index", ""), "at_index");
  if (at < 0) throw ValidationError("at_index", "must be >= 0");
  e.current_position_index = static_cast<std::size_t>(at);
  e.timestamp_s = number_or(j, "timestamp_s", "", 0.0);
  const json& threats = require(j, "threats", "");
  if (!threats.is_array()) throw ValidationError("threats", "expected an array");
  for (std::size_t i = 0; i < threats.size(); ++i) {
    e.new_threats.push_back(threat_from_json(threats[i], "threats[" + std::to_string(i) + "]"));
  }
  return e;
}

json to_json(const DynamicEvent& e) {
  return json{{"at_index", e.current_position_index},
              {"timestamp_s", e.timestamp_s},
              {"threats", threats_to_json(e.new_threats)}};
}

DynamicEvent load_event(const std::filesystem::path& path) { return event_from_json(read_json_file(path)); }

// ---------------------------------------------------------------- rasters / reports

json raster_to_json(const Raster<double>& raster) {
  return json{{"rows", raster.rows()}, {"cols", raster.cols()}, {"values", raster.data()}};
}

json risk_field_to_json(const RiskField& f) {
  return json{{"rows", f.risk.rows()},
              {"cols", f.risk.cols()},
              {"formation_width_m", f.formation_width_m},
              {"p_det", f.p_det.data()},
              {"risk", f.risk.data()},
              {"risk_form", f.risk_form.data()},
              {"log_risk", f.log_risk.data()}};
}

json report_to_json(const ComparisonReport& r, bool include_timings) {
  auto pair = [](const KpiDelta& d) { return json{{"pre", d.pre}, {"post", d.post}, {"delta", d.delta}}; };
  auto side = [&](const RepairOutcome& o) {
    json j{{"result", result_to_json(o.plan, include_timings)},
           {"unchanged", o.unchanged},
           {"window_widened", o.window_widened},
           {"full_replan_used", o.full_replan_used},
           {"segment_time_s", o.original_segment_time_s},
           {"segment_budget_s", o.segment_budget_s},
           {"repaired_segment_time_s", o.repaired_segment_time_s},
           {"window_nodes", o.window.nodes.size()},
           {"window_radius_m", o.window.radius_m},
           {"entry_index", o.window.entry_index},
           {"exit_index", o.window.exit_index},
           {"labels_expanded", o.stats.labels_expanded}};
    if (include_timings) j["wall_time_s"] = o.wall_time_s;
    return j;
  };
  json j{{"log_risk", pair(r.log_risk)},
         {"time_s", pair(r.time_s)},
         {"survival", pair(r.survival)},
         {"risk_gap", r.risk_gap},
         {"patch", side(r.patch)},
         {"full", side(r.full)}};
  if (include_timings) {
    j["patch_wall_s"] = r.patch_wall_s;
    j["full_wall_s"] = r.full_wall_s;
  }
  return j;
}

json profile_to_json(const CostGraph& graph, const PlanResult& result) {
  const auto nodes = to_nodes(graph, result.path);
  json points = json::array();
  double t = 0.0;
  double d = 0.0;
  double l = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i > 0) {
      const Arc* a = graph.find_arc(nodes[i - 1], nodes[i]);
      if (a == nullptr) throw ValidationError("path", "plan path is not connected in this graph");
      t += a->time;
      d += a->distance;
      l += graph.log_risk(nodes[i]);
    }
    const Point p = graph.centroid(nodes[i]);
    points.push_back(json{{"index", i},
                          {"cell", cell_to(result.path[i])},
                          {"x", p.x},
                          {"y", p.y},
                          {"altitude_m", graph.elevation(nodes[i])},
                          {"land_cover", graph.land_cover(nodes[i])},
                          {"risk_form", graph.cell_risk(nodes[i])},
                          {"log_risk", graph.log_risk(nodes[i])},
                          {"cumulative_time_s", t},
                          {"cumulative_distance_m", d},
                          {"cumulative_log_risk", l}});
  }
  return json{{"points", points}};
}

}  // namespace argus::io
