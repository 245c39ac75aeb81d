#include "argus/waypoints.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "argus/errors.hpp"

namespace argus {

namespace {

constexpr double kEarthRadiusM = 6378137.0;
constexpr int kFrameGlobal = 0;
constexpr int kCmdNavWaypoint = 16;

}  // namespace

std::vector<std::size_t> decimate_path(std::span<const Cell> path, int decimate) {
  if (path.empty()) throw ValidationError("path", "cannot export an empty path");
  if (decimate < 1) throw ValidationError("decimate", "must be >= 1");
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const bool endpoint = i == 0 || i + 1 == path.size();
    bool turn = false;
    if (!endpoint) {
      const int dr0 = path[i].row - path[i - 1].row;
      const int dc0 = path[i].col - path[i - 1].col;
      const int dr1 = path[i + 1].row - path[i].row;
      const int dc1 = path[i + 1].col - path[i].col;
      turn = dr0 != dr1 || dc0 != dc1;
    }
    if (endpoint || turn || i % static_cast<std::size_t>(decimate) == 0) keep.push_back(i);
  }
  return keep;
}

WaypointList make_waypoints(const TerrainGrid& grid, std::span<const Cell> path, int decimate) {
  WaypointList out;
  for (std::size_t i : decimate_path(path, decimate)) {
    const Cell c = path[i];
    if (!grid.contains(c)) throw ValidationError("path", "cell outside grid");
    const Point p = grid.geometry.centroid(c);
    const double north = p.y - grid.geometry.origin.y;
    const double east = p.x - grid.geometry.origin.x;
    Waypoint w;
    w.index = out.size();
    w.is_home = out.empty();
    w.altitude_m = grid.elevation(c.row, c.col);
    if (grid.geo_anchor) {
      const double lat0 = grid.geo_anchor->lat_deg;
      w.x = lat0 + north / kEarthRadiusM * 180.0 / std::numbers::pi;
      w.y = grid.geo_anchor->lon_deg +
            east / (kEarthRadiusM * std::cos(lat0 * std::numbers::pi / 180.0)) * 180.0 / std::numbers::pi;
    } else {
      w.x = north;
      w.y = east;
    }
    out.push_back(w);
  }
  return out;
}

std::string format_waypoints(const WaypointList& waypoints) {
  std::string out = "QGC WPL 110\n";
  char line[256];
  for (const Waypoint& w : waypoints) {
    std::snprintf(line, sizeof line, "%zu\t%d\t%d\t%d\t%.6f\t%.6f\t%.6f\t%.6f\t%.8f\t%.8f\t%.6f\t%d\n", w.index,
                  w.is_home ? 1 : 0, kFrameGlobal, kCmdNavWaypoint, 0.0, 0.0, 0.0, 0.0, w.x, w.y, w.altitude_m, 1);
    out += line;
  }
  return out;
}

std::string export_waypoints(const TerrainGrid& grid, std::span<const Cell> path, int decimate) {
  return format_waypoints(make_waypoints(grid, path, decimate));
}

WaypointList parse_waypoints(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw ParseError("line 1", "empty waypoint file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.rfind("QGC WPL 110", 0) != 0) throw ParseError("line 1", "missing 'QGC WPL 110' header");
  WaypointList out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string f;
    while (std::getline(ls, f, '\t')) fields.push_back(f);
    if (fields.size() != 12) {
      throw ParseError("line " + std::to_string(line_no), "expected 12 tab-separated fields, got " +
                                                              std::to_string(fields.size()));
    }
    try {
      Waypoint w;
      w.index = std::stoul(fields[0]);
      w.is_home = std::stoi(fields[1]) == 1;
      w.x = std::stod(fields[8]);
      w.y = std::stod(fields[9]);
      w.altitude_m = std::stod(fields[10]);
      if (w.index != out.size()) throw ParseError("line " + std::to_string(line_no), "non-consecutive index");
      out.push_back(w);
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError("line " + std::to_string(line_no), std::string("bad numeric field: ") + e.what());
    }
  }
  return out;
}

}  // namespace argus
