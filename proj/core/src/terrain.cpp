#include "argus/terrain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace argus {

double distance(Point a, Point b) noexcept { return std::hypot(a.x - b.x, a.y - b.y); }

TerrainGrid TerrainGrid::flat(int rows, int cols, double cell_size, int land_cover) {
  TerrainGrid grid;
  grid.geometry = GridGeometry{rows, cols, cell_size, {}};
  grid.elevation = Raster<double>(rows, cols, 0.0);
  grid.land_cover = Raster<int>(rows, cols, land_cover);
  grid.obstacle = Raster<std::uint8_t>(rows, cols, 0);
  return grid;
}

void TerrainGrid::validate() const {
  if (geometry.rows <= 0 || geometry.cols <= 0) {
    throw ValidationError("rows/cols", "grid dimensions must be positive");
  }
  if (!(geometry.cell_size > 0.0) || !std::isfinite(geometry.cell_size)) {
    throw ValidationError("cell_size_m", "must be positive");
  }
  auto check = [&](const auto& raster, const char* name) {
    if (raster.rows() != geometry.rows || raster.cols() != geometry.cols) {
      throw ShapeError(std::string(name) + " raster is " + std::to_string(raster.rows()) + "x" +
                       std::to_string(raster.cols()) + ", grid is " + std::to_string(geometry.rows) +
                       "x" + std::to_string(geometry.cols));
    }
  };
  check(elevation, "elevation");
  check(land_cover, "land_cover");
  check(obstacle, "obstacles");
  for (double e : elevation.values()) {
    if (!std::isfinite(e)) throw ValidationError("elevation", "non-finite value");
  }
}

SlopeFactorTable::SlopeFactorTable()
    : SlopeFactorTable({{0.0, 1.0}, {0.1, 0.85}, {0.2, 0.6}, {0.35, 0.35}, {0.5, 0.15}}) {}

SlopeFactorTable::SlopeFactorTable(std::vector<std::pair<double, double>> breakpoints)
    : points_(std::move(breakpoints)) {
  if (points_.empty()) throw ValidationError("slope_factor", "needs at least one breakpoint");
  std::sort(points_.begin(), points_.end());
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (points_[i].first == points_[i - 1].first) {
      throw ValidationError("slope_factor", "duplicate breakpoint slope");
    }
  }
  symmetric_ = points_.front().first >= 0.0;
  if (symmetric_ && points_.front().first != 0.0) {
    throw ValidationError("slope_factor", "table must contain slope 0");
  }
  for (const auto& [slope, factor] : points_) {
    if (!(factor >= 0.0 && factor <= 1.0)) {
      throw ValidationError("slope_factor", "factors must lie in [0,1]");
    }
  }
  if (std::abs((*this)(0.0) - 1.0) > 1e-12) {
    throw ValidationError("slope_factor", "factor at slope 0 must be 1");
  }
  // Non-increasing away from zero on both sides.
  for (std::size_t i = 1; i < points_.size(); ++i) {
    const auto& a = points_[i - 1];
    const auto& b = points_[i];
    if (a.first >= 0.0 && b.second > a.second) {
      throw ValidationError("slope_factor", "factor must not increase with ascent steepness");
    }
    if (b.first <= 0.0 && a.second > b.second) {
      throw ValidationError("slope_factor", "factor must not increase with descent steepness");
    }
  }
}

double SlopeFactorTable::operator()(double slope) const noexcept {
  const double s = symmetric_ ? std::abs(slope) : slope;
  if (s <= points_.front().first) return points_.front().second;
  if (s >= points_.back().first) return points_.back().second;
  auto hi = std::upper_bound(points_.begin(), points_.end(), s,
                             [](double v, const auto& p) { return v < p.first; });
  auto lo = hi - 1;
  const double t = (s - lo->first) / (hi->first - lo->first);
  return lo->second + t * (hi->second - lo->second);
}

double MobilityModel::speed(int land_cover) const {
  auto it = class_speed.find(land_cover);
  if (it == class_speed.end()) {
    throw ValidationError("class_speed", "no speed for land-cover class " + std::to_string(land_cover));
  }
  return it->second;
}

void MobilityModel::validate() const {
  if (class_speed.empty()) throw ValidationError("class_speed", "must not be empty");
  for (const auto& [cls, v] : class_speed) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ValidationError("class_speed", "speed for class " + std::to_string(cls) + " must be positive");
    }
  }
  if (!(max_slope > 0.0)) throw ValidationError("max_slope", "must be positive");
  if (ascent_window < 1) throw ValidationError("ascent_window", "must be >= 1");
  if (!(ascent_threshold > 0.0)) throw ValidationError("ascent_threshold", "must be positive");
}

void MobilityModel::check_grid(const TerrainGrid& grid) const {
  for (int cls : grid.land_cover.values()) {
    if (!class_speed.contains(cls)) {
      throw ValidationError("land_cover", "class " + std::to_string(cls) + " missing from mobility model");
    }
  }
}

MobilityModel MobilityModel::defaults() {
  MobilityModel m;
  // open ground, road, forest, scrub, wetland
  m.class_speed = {{0, 5.0}, {1, 8.0}, {2, 2.5}, {3, 3.5}, {4, 1.5}};
  m.slope_factor = SlopeFactorTable(
      {{-0.5, 0.3}, {-0.2, 0.8}, {0.0, 1.0}, {0.1, 0.85}, {0.2, 0.6}, {0.35, 0.35}, {0.5, 0.15}});
  m.max_slope = 0.5;
  return m;
}

bool adjacent(Cell u, Cell v) noexcept {
  const int dr = std::abs(u.row - v.row);
  const int dc = std::abs(u.col - v.col);
  return dr <= 1 && dc <= 1 && (dr + dc) > 0;
}

double step_distance(const GridGeometry& geometry, Cell u, Cell v) {
  if (!adjacent(u, v)) throw DomainError("cells are not 8-neighbours");
  return (u.row != v.row && u.col != v.col) ? geometry.cell_size * std::sqrt(2.0) : geometry.cell_size;
}

double derive_slope(const TerrainGrid& grid, Cell u, Cell v) {
  if (!grid.contains(u) || !grid.contains(v)) throw DomainError("cell outside grid");
  const double d = step_distance(grid.geometry, u, v);
  return (grid.elevation(v.row, v.col) - grid.elevation(u.row, u.col)) / d;
}

std::optional<double> edge_time(const TerrainGrid& grid, const MobilityModel& mobility, Cell u, Cell v) {
  const double slope = derive_slope(grid, u, v);
  if (std::abs(slope) > mobility.max_slope) return std::nullopt;
  const double factor = mobility.slope_factor(slope);
  if (!(factor > 0.0)) return std::nullopt;
  const double speed = mobility.speed(grid.land_cover(v.row, v.col)) * factor;
  return step_distance(grid.geometry, u, v) / speed;
}

}  // namespace argus
