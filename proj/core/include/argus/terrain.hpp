#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "argus/raster.hpp"

namespace argus {

struct Cell {
  int row = 0;
  int col = 0;
  auto operator<=>(const Cell&) const = default;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(Point a, Point b) noexcept;

// Latitude/longitude of the (0,0) cell centroid, degrees.
struct GeoAnchor {
  double lat_deg = 0.0;
  double lon_deg = 0.0;
};

// Placement of the raster in the plane. Cell (r, c) has its centroid at
// origin + (c * cell_size, r * cell_size).
struct GridGeometry {
  int rows = 0;
  int cols = 0;
  double cell_size = 25.0;
  Point origin;

  bool contains(Cell cell) const noexcept {
    return cell.row >= 0 && cell.row < rows && cell.col >= 0 && cell.col < cols;
  }
  std::size_t cell_count() const noexcept { return static_cast<std::size_t>(rows) * cols; }
  std::size_t index(Cell cell) const noexcept {
    return static_cast<std::size_t>(cell.row) * cols + cell.col;
  }
  Cell cell_at(std::size_t index) const noexcept {
    return {static_cast<int>(index / cols), static_cast<int>(index % cols)};
  }
  Point centroid(Cell cell) const noexcept {
    return {origin.x + cell.col * cell_size, origin.y + cell.row * cell_size};
  }
};

struct TerrainGrid {
  GridGeometry geometry;
  Raster<double> elevation;
  Raster<int> land_cover;
  Raster<std::uint8_t> obstacle;
  std::optional<GeoAnchor> geo_anchor;

  int rows() const noexcept { return geometry.rows; }
  int cols() const noexcept { return geometry.cols; }
  double cell_size() const noexcept { return geometry.cell_size; }
  bool contains(Cell cell) const noexcept { return geometry.contains(cell); }
  bool is_obstacle(Cell cell) const { return obstacle(cell.row, cell.col) != 0; }

  // Flat, obstacle-free grid of a single land-cover class.
  static TerrainGrid flat(int rows, int cols, double cell_size = 25.0, int land_cover = 0);

  // Checks shape agreement and cell_size > 0; throws ShapeError / ValidationError.
  void validate() const;
};

// Piecewise-linear speed multiplier over signed slope (rise/run, positive is
// ascent). Breakpoints must cover slope 0 with factor 1. If every breakpoint is
// non-negative the table is mirrored for descents.
class SlopeFactorTable {
 public:
  SlopeFactorTable();
  explicit SlopeFactorTable(std::vector<std::pair<double, double>> breakpoints);

  double operator()(double slope) const noexcept;
  const std::vector<std::pair<double, double>>& breakpoints() const noexcept { return points_; }

 private:
  std::vector<std::pair<double, double>> points_;
  bool symmetric_ = true;
};

struct MobilityModel {
  std::map<int, double> class_speed;
  SlopeFactorTable slope_factor;
  double max_slope = 0.5;
  int ascent_window = 4;
  double ascent_threshold = 0.6;

  double speed(int land_cover) const;
  void validate() const;
  // Every land-cover class used by the grid has a speed.
  void check_grid(const TerrainGrid& grid) const;

  static MobilityModel defaults();
};

bool adjacent(Cell u, Cell v) noexcept;

// Centroid distance between two 8-neighbours, meters.
double step_distance(const GridGeometry& geometry, Cell u, Cell v);

// Signed gradient from u to v; throws DomainError for non-adjacent cells.
double derive_slope(const TerrainGrid& grid, Cell u, Cell v);

// Traversal time u -> v in seconds, or nullopt when the slope makes the move
// impassable. Land-cover speed is taken from the destination cell.
std::optional<double> edge_time(const TerrainGrid& grid, const MobilityModel& mobility, Cell u, Cell v);

}  // namespace argus
