#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "argus/cost_graph.hpp"
#include "argus/raster.hpp"
#include "argus/terrain.hpp"

namespace argus {

// Plateau-decay detection curve: certain detection up to
// plateau_fraction * range, smooth decay to zero at range.
struct DetectionParams {
  double range_m = 0.0;
  double plateau_fraction = 0.5;
  double decay_exponent = 1.0;

  void validate() const;
};

double detection_probability(const DetectionParams& params, double distance_m) noexcept;

struct PriorCell {
  Cell cell;
  double weight = 0.0;
};

struct ThreatSpec {
  std::string id;
  DetectionParams detection;
  // Consequence factor in [0,1]; `impact_raster`, when present, overrides the scalar.
  double impact = 1.0;
  std::optional<Raster<double>> impact_raster;
  // Sparse locational prior; weights sum to 1 after normalize().
  std::vector<PriorCell> prior;

  double impact_at(Cell cell) const {
    return impact_raster ? (*impact_raster)(cell.row, cell.col) : impact;
  }
  // Validates against the grid and rescales the prior to unit mass.
  void normalize(const GridGeometry& geometry);
  Point mean_location(const GridGeometry& geometry) const;

  static ThreatSpec dirac(std::string id, Cell at, DetectionParams detection, double impact = 1.0);
};

// Expected detection over the locational prior (direct convolution truncated
// at the detection range).
Raster<double> expected_detection(const ThreatSpec& threat, const GridGeometry& geometry);

// 1 - prod(1 - p_i). `rows`/`cols` give the shape when the list is empty.
Raster<double> combine_threats(std::span<const Raster<double>> per_threat, int rows, int cols);

Raster<double> risk_surface(const Raster<double>& p_det, const Raster<double>& impact);
Raster<double> risk_surface(const Raster<double>& p_det, double impact);

// Offsets (dr, dc) whose centroid distance is within formation_width / 2.
std::vector<Cell> formation_offsets(double formation_width_m, double cell_size);

// Max of `risk` over a disk of radius formation_width / 2 around each cell.
Raster<double> formation_dilate(const Raster<double>& risk, double formation_width_m, double cell_size);

inline constexpr double kRiskClamp = 1e-9;

double log_cost(double risk_form) noexcept;
Raster<double> log_cost(const Raster<double>& risk_form);

struct RiskField {
  Raster<double> p_det;
  Raster<double> risk;
  Raster<double> risk_form;
  Raster<double> log_risk;
  double formation_width_m = 0.0;
};

// Full pipeline: per-threat expected detection scaled by each threat's
// impact, survival composition, formation dilation, log transform.
RiskField build_risk_field(const GridGeometry& geometry, std::span<const ThreatSpec> threats,
                           double formation_width_m);

// Copies the field's risk_form / log_risk rasters onto graph nodes.
CostGraph apply_risk(const CostGraph& graph, const RiskField& field);

// Sum of node log-risk over path[1..]; throws ValidationError if consecutive
// nodes are not joined by an arc.
double path_log_risk(const CostGraph& graph, std::span<const NodeId> path);
double path_time(const CostGraph& graph, std::span<const NodeId> path);
double path_distance(const CostGraph& graph, std::span<const NodeId> path);
double path_survival(const CostGraph& graph, std::span<const NodeId> path);

}  // namespace argus
