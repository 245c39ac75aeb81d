#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "argus/terrain.hpp"

namespace argus {

// One mission item. `x`/`y` are latitude/longitude in degrees when the grid
// has a geo anchor, otherwise local northing/easting in meters from the
// grid origin.
struct Waypoint {
  std::size_t index = 0;
  double x = 0.0;
  double y = 0.0;
  double altitude_m = 0.0;
  bool is_home = false;
};

using WaypointList = std::vector<Waypoint>;

// Path indices kept when exporting: endpoints, every turn, and every
// `decimate`-th cell. decimate == 1 keeps everything.
std::vector<std::size_t> decimate_path(std::span<const Cell> path, int decimate);

WaypointList make_waypoints(const TerrainGrid& grid, std::span<const Cell> path, int decimate = 1);

// Plain-text "QGC WPL 110" mission file.
std::string format_waypoints(const WaypointList& waypoints);
std::string export_waypoints(const TerrainGrid& grid, std::span<const Cell> path, int decimate = 1);

// Throws ParseError naming the offending line.
WaypointList parse_waypoints(std::string_view text);

}  // namespace argus
