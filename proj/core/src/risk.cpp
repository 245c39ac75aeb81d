#include "argus/risk.hpp"

#include <algorithm>
#include <cmath>

namespace argus {

void DetectionParams::validate() const {
  if (!(range_m > 0.0) || !std::isfinite(range_m)) throw ValidationError("R_m", "must be positive");
  if (!(plateau_fraction > 0.0 && plateau_fraction < 1.0)) throw ValidationError("phi", "must lie in (0,1)");
  if (!(decay_exponent > 0.0) || !std::isfinite(decay_exponent)) throw ValidationError("p", "must be positive");
}

double detection_probability(const DetectionParams& params, double distance_m) noexcept {
  const double plateau = params.plateau_fraction * params.range_m;
  if (distance_m <= plateau) return 1.0;
  if (distance_m >= params.range_m) return 0.0;
  const double u = (distance_m - plateau) / (params.range_m - plateau);
  return std::pow(1.0 - u * u, params.decay_exponent);
}

void ThreatSpec::normalize(const GridGeometry& geometry) {
  detection.validate();
  if (!(impact >= 0.0 && impact <= 1.0)) throw ValidationError("impact", "must lie in [0,1]");
  if (impact_raster) {
    if (impact_raster->size() == geometry.cell_count() && impact_raster->rows() != geometry.rows) {
      impact_raster = Raster<double>(geometry.rows, geometry.cols, std::move(impact_raster->data()));
    }
    if (impact_raster->rows() != geometry.rows || impact_raster->cols() != geometry.cols) {
      throw ShapeError("impact raster shape does not match grid");
    }
    for (double v : impact_raster->values()) {
      if (!(v >= 0.0 && v <= 1.0)) throw ValidationError("impact", "raster values must lie in [0,1]");
    }
  }
  if (prior.empty()) throw ValidationError("prior", "threat '" + id + "' has an empty prior");
  double mass = 0.0;
  for (const PriorCell& p : prior) {
    if (!geometry.contains(p.cell)) throw ShapeError("prior cell outside grid for threat '" + id + "'");
    if (!(p.weight >= 0.0) || !std::isfinite(p.weight)) throw ValidationError("prior", "weights must be >= 0");
    mass += p.weight;
  }
  if (!(mass > 0.0)) throw ValidationError("prior", "threat '" + id + "' prior has zero mass");
  for (PriorCell& p : prior) p.weight /= mass;
}

Point ThreatSpec::mean_location(const GridGeometry& geometry) const {
  Point m;
  double mass = 0.0;
  for (const PriorCell& p : prior) {
    const Point c = geometry.centroid(p.cell);
    m.x += p.weight * c.x;
    m.y += p.weight * c.y;
    mass += p.weight;
  }
  if (mass > 0.0) {
    m.x /= mass;
    m.y /= mass;
  }
  return m;
}

ThreatSpec ThreatSpec::dirac(std::string id, Cell at, DetectionParams detection, double impact) {
  ThreatSpec t;
  t.id = std::move(id);
  t.detection = detection;
  t.impact = impact;
  t.prior = {PriorCell{at, 1.0}};
  return t;
}

Raster<double> expected_detection(const ThreatSpec& threat, const GridGeometry& geometry) {
  Raster<double> out(geometry.rows, geometry.cols, 0.0);
  const double range = threat.detection.range_m;
  const int reach = static_cast<int>(std::ceil(range / geometry.cell_size));
  for (const PriorCell& p : threat.prior) {
    if (!geometry.contains(p.cell)) throw ShapeError("prior cell outside grid for threat '" + threat.id + "'");
    if (p.weight == 0.0) continue;
    const int r0 = std::max(0, p.cell.row - reach);
    const int r1 = std::min(geometry.rows - 1, p.cell.row + reach);
    const int c0 = std::max(0, p.cell.col - reach);
    const int c1 = std::min(geometry.cols - 1, p.cell.col + reach);
    for (int r = r0; r <= r1; ++r) {
      for (int c = c0; c <= c1; ++c) {
        const double d = geometry.cell_size * std::hypot(r - p.cell.row, c - p.cell.col);
        if (d >= range) continue;
        out(r, c) += p.weight * detection_probability(threat.detection, d);
      }
    }
  }
  for (double& v : out.data()) v = std::clamp(v, 0.0, 1.0);
  return out;
}

Raster<double> combine_threats(std::span<const Raster<double>> per_threat, int rows, int cols) {
  Raster<double> survival(rows, cols, 1.0);
  for (const auto& p : per_threat) {
    if (p.rows() != rows || p.cols() != cols) throw ShapeError("threat rasters differ in shape");
    for (std::size_t i = 0; i < p.size(); ++i) survival[i] *= (1.0 - p[i]);
  }
  for (double& v : survival.data()) v = std::clamp(1.0 - v, 0.0, 1.0);
  return survival;
}

Raster<double> risk_surface(const Raster<double>& p_det, const Raster<double>& impact) {
  if (!p_det.same_shape(impact)) throw ShapeError("impact raster shape does not match detection raster");
  Raster<double> out(p_det.rows(), p_det.cols(), 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!(impact[i] >= 0.0 && impact[i] <= 1.0)) throw ValidationError("impact", "values must lie in [0,1]");
    out[i] = p_det[i] * impact[i];
  }
  return out;
}

Raster<double> risk_surface(const Raster<double>& p_det, double impact) {
  return risk_surface(p_det, Raster<double>(p_det.rows(), p_det.cols(), impact));
}

std::vector<Cell> formation_offsets(double formation_width_m, double cell_size) {
  if (!(formation_width_m >= 0.0)) throw ValidationError("formation_width_m", "must be >= 0");
  const double radius = formation_width_m / 2.0;
  const int reach = static_cast<int>(std::floor(radius / cell_size + 1e-9));
  std::vector<Cell> out;
  for (int dr = -reach; dr <= reach; ++dr) {
    for (int dc = -reach; dc <= reach; ++dc) {
      if (cell_size * std::hypot(dr, dc) <= radius + 1e-9 * cell_size) out.push_back({dr, dc});
    }
  }
  return out;
}

Raster<double> formation_dilate(const Raster<double>& risk, double formation_width_m, double cell_size) {
  const auto offsets = formation_offsets(formation_width_m, cell_size);
  if (offsets.size() == 1) return risk;
  Raster<double> out(risk.rows(), risk.cols(), 0.0);
  for (int r = 0; r < risk.rows(); ++r) {
    for (int c = 0; c < risk.cols(); ++c) {
      double m = risk(r, c);
      for (const Cell& o : offsets) {
        const int rr = r + o.row;
        const int cc = c + o.col;
        if (rr < 0 || rr >= risk.rows() || cc < 0 || cc >= risk.cols()) continue;
        m = std::max(m, risk(rr, cc));
      }
      out(r, c) = m;
    }
  }
  return out;
}

double log_cost(double risk_form) noexcept {
  return -std::log1p(-std::min(std::max(risk_form, 0.0), 1.0 - kRiskClamp));
}

Raster<double> log_cost(const Raster<double>& risk_form) {
  Raster<double> out(risk_form.rows(), risk_form.cols(), 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = log_cost(risk_form[i]);
  return out;
}

RiskField build_risk_field(const GridGeometry& geometry, std::span<const ThreatSpec> threats,
                           double formation_width_m) {
  std::vector<Raster<double>> detection;
  std::vector<Raster<double>> weighted;
  detection.reserve(threats.size());
  weighted.reserve(threats.size());
  for (const ThreatSpec& t : threats) {
    ThreatSpec normalized = t;
    normalized.normalize(geometry);
    detection.push_back(expected_detection(normalized, geometry));
    Raster<double> w = detection.back();
    for (int r = 0; r < geometry.rows; ++r) {
      for (int c = 0; c < geometry.cols; ++c) w(r, c) *= normalized.impact_at({r, c});
    }
    weighted.push_back(std::move(w));
  }
  RiskField field;
  field.formation_width_m = formation_width_m;
  field.p_det = combine_threats(detection, geometry.rows, geometry.cols);
  field.risk = combine_threats(weighted, geometry.rows, geometry.cols);
  field.risk_form = formation_dilate(field.risk, formation_width_m, geometry.cell_size);
  field.log_risk = log_cost(field.risk_form);
  return field;
}

CostGraph apply_risk(const CostGraph& graph, const RiskField& field) {
  const auto& g = graph.geometry();
  if (field.risk_form.rows() != g.rows || field.risk_form.cols() != g.cols) {
    throw ShapeError("risk field shape does not match graph grid");
  }
  std::vector<double> risk_form(graph.node_count());
  std::vector<double> log_risk(graph.node_count());
  for (std::size_t u = 0; u < graph.node_count(); ++u) {
    const Cell c = graph.cell_of(static_cast<NodeId>(u));
    risk_form[u] = field.risk_form(c.row, c.col);
    log_risk[u] = field.log_risk(c.row, c.col);
  }
  return graph.with_risk(std::move(risk_form), std::move(log_risk));
}

namespace {

template <class F>
void walk_arcs(const CostGraph& graph, std::span<const NodeId> path, F&& f) {
  if (path.empty()) throw ValidationError("path", "empty path");
  for (NodeId u : path) {
    if (u < 0 || static_cast<std::size_t>(u) >= graph.node_count()) {
      throw ValidationError("path", "node id out of range");
    }
  }
  for (std::size_t i = 1; i < path.size(); ++i) {
    const Arc* a = graph.find_arc(path[i - 1], path[i]);
    if (a == nullptr) throw ValidationError("path", "step " + std::to_string(i) + " is not an edge of the graph");
    f(*a);
  }
}

}  // namespace

double path_log_risk(const CostGraph& graph, std::span<const NodeId> path) {
  double sum = 0.0;
  walk_arcs(graph, path, [&](const Arc& a) { sum += graph.log_risk(a.to); });
  return sum;
}

double path_time(const CostGraph& graph, std::span<const NodeId> path) {
  double sum = 0.0;
  walk_arcs(graph, path, [&](const Arc& a) { sum += a.time; });
  return sum;
}

double path_distance(const CostGraph& graph, std::span<const NodeId> path) {
  double sum = 0.0;
  walk_arcs(graph, path, [&](const Arc& a) { sum += a.distance; });
  return sum;
}

double path_survival(const CostGraph& graph, std::span<const NodeId> path) {
  return std::exp(-path_log_risk(graph, path));
}

}  // namespace argus
