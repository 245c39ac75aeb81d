#include "argus/cost_graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace argus {

namespace {

constexpr int kDr[8] = {-1, -1, -1, 0, 0, 1, 1, 1};
constexpr int kDc[8] = {-1, 0, 1, -1, 1, -1, 0, 1};

}  // namespace

CostGraph::CostGraph(std::shared_ptr<const Topology> topo) : topo_(std::move(topo)) {
  const std::size_t n = topo_->node_cell.size();
  risk_form_ = std::make_shared<const std::vector<double>>(n, 0.0);
  log_risk_ = std::make_shared<const std::vector<double>>(n, 0.0);
}

std::size_t CostGraph::node_count() const noexcept { return topo_ ? topo_->node_cell.size() : 0; }

std::size_t CostGraph::edge_count() const noexcept { return topo_ ? topo_->arcs.size() / 2 : 0; }

std::span<const Arc> CostGraph::arcs(NodeId u) const {
  const auto i = static_cast<std::size_t>(u);
  return std::span<const Arc>(topo_->arcs).subspan(topo_->offsets[i], topo_->offsets[i + 1] - topo_->offsets[i]);
}

const Arc* CostGraph::find_arc(NodeId u, NodeId v) const {
  for (const Arc& a : arcs(u)) {
    if (a.to == v) return &a;
  }
  return nullptr;
}

const GridGeometry& CostGraph::geometry() const { return topo_->geometry; }

NodeId CostGraph::node_at(Cell cell) const {
  if (!topo_->geometry.contains(cell)) return kNoNode;
  return topo_->cell_node[topo_->geometry.index(cell)];
}

Cell CostGraph::cell_of(NodeId u) const {
  return topo_->geometry.cell_at(topo_->node_cell[static_cast<std::size_t>(u)]);
}

double CostGraph::elevation(NodeId u) const { return topo_->elevation[static_cast<std::size_t>(u)]; }

int CostGraph::land_cover(NodeId u) const { return topo_->land_cover[static_cast<std::size_t>(u)]; }

CostGraph CostGraph::with_risk(std::vector<double> risk_form, std::vector<double> log_risk) const {
  if (risk_form.size() != node_count() || log_risk.size() != node_count()) {
    throw ShapeError("risk layers must have one value per node (" + std::to_string(node_count()) + ")");
  }
  for (double l : log_risk) {
    if (!(l >= 0.0) || !std::isfinite(l)) throw ValidationError("log_risk", "must be finite and >= 0");
  }
  CostGraph out = *this;
  out.risk_form_ = std::make_shared<const std::vector<double>>(std::move(risk_form));
  out.log_risk_ = std::make_shared<const std::vector<double>>(std::move(log_risk));
  return out;
}

NodeId CostGraph::Induced::to_local(NodeId parent) const {
  if (parent < 0 || static_cast<std::size_t>(parent) >= local_of_parent.size()) return kNoNode;
  return local_of_parent[static_cast<std::size_t>(parent)];
}

CostGraph::Induced CostGraph::induced(std::span<const NodeId> nodes) const {
  Induced out;
  out.local_of_parent.assign(node_count(), kNoNode);
  for (NodeId p : nodes) {
    if (p < 0 || static_cast<std::size_t>(p) >= node_count()) throw DomainError("node id out of range");
    if (out.local_of_parent[static_cast<std::size_t>(p)] != kNoNode) continue;
    out.local_of_parent[static_cast<std::size_t>(p)] = static_cast<NodeId>(out.to_parent.size());
    out.to_parent.push_back(p);
  }

  auto topo = std::make_shared<Topology>();
  topo->geometry = topo_->geometry;
  topo->cell_node.assign(topo_->cell_node.size(), kNoNode);
  topo->offsets.reserve(out.to_parent.size() + 1);
  topo->offsets.push_back(0);
  std::vector<double> risk_form;
  std::vector<double> log_risk;
  for (std::size_t local = 0; local < out.to_parent.size(); ++local) {
    const NodeId p = out.to_parent[local];
    const auto pi = static_cast<std::size_t>(p);
    topo->node_cell.push_back(topo_->node_cell[pi]);
    topo->cell_node[topo_->node_cell[pi]] = static_cast<NodeId>(local);
    topo->elevation.push_back(topo_->elevation[pi]);
    topo->land_cover.push_back(topo_->land_cover[pi]);
    risk_form.push_back((*risk_form_)[pi]);
    log_risk.push_back((*log_risk_)[pi]);
    for (const Arc& a : arcs(p)) {
      const NodeId to = out.local_of_parent[static_cast<std::size_t>(a.to)];
      if (to == kNoNode) continue;
      Arc local_arc = a;
      local_arc.to = to;
      topo->arcs.push_back(local_arc);
    }
    topo->offsets.push_back(topo->arcs.size());
  }
  out.graph = CostGraph(std::move(topo));
  out.graph = out.graph.with_risk(std::move(risk_form), std::move(log_risk));
  return out;
}

CostGraph build_graph(const TerrainGrid& grid, const MobilityModel& mobility) {
  grid.validate();
  mobility.validate();
  mobility.check_grid(grid);

  auto topo = std::make_shared<CostGraph::Topology>();
  topo->geometry = grid.geometry;
  const std::size_t cells = grid.geometry.cell_count();
  topo->cell_node.assign(cells, kNoNode);
  for (std::size_t i = 0; i < cells; ++i) {
    if (grid.obstacle[i] != 0) continue;
    topo->cell_node[i] = static_cast<NodeId>(topo->node_cell.size());
    topo->node_cell.push_back(static_cast<std::uint32_t>(i));
    topo->elevation.push_back(grid.elevation[i]);
    topo->land_cover.push_back(grid.land_cover[i]);
  }
  if (topo->node_cell.empty()) throw EmptyGraphError("grid has no free cells");

  auto free_cell = [&](Cell c) { return grid.contains(c) && !grid.is_obstacle(c); };

  topo->offsets.reserve(topo->node_cell.size() + 1);
  topo->offsets.push_back(0);
  for (std::uint32_t idx : topo->node_cell) {
    const Cell u = grid.geometry.cell_at(idx);
    for (int k = 0; k < 8; ++k) {
      const Cell v{u.row + kDr[k], u.col + kDc[k]};
      if (!free_cell(v)) continue;
      if (kDr[k] != 0 && kDc[k] != 0) {
        // Squeezing between two blocked corners is a cut; brushing one is not.
        if (!free_cell({u.row + kDr[k], u.col}) && !free_cell({u.row, u.col + kDc[k]})) continue;
      }
      // Both directions must be passable so the topology stays symmetric.
      const auto forward = edge_time(grid, mobility, u, v);
      const auto backward = edge_time(grid, mobility, v, u);
      if (!forward || !backward) continue;
      topo->arcs.push_back(Arc{topo->cell_node[grid.geometry.index(v)], *forward, *backward,
                               step_distance(grid.geometry, u, v), derive_slope(grid, u, v)});
    }
    topo->offsets.push_back(topo->arcs.size());
  }
  return CostGraph(std::move(topo));
}

}  // namespace argus
