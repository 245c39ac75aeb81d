#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "argus/terrain.hpp"

namespace argus {

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

// Directed arc out of a node. `time_back` is the traversal time of the
// reverse arc (to -> from); graphs are symmetric in topology, not in time.
struct Arc {
  NodeId to = kNoNode;
  double time = 0.0;
  double time_back = 0.0;
  double distance = 0.0;
  double slope = 0.0;
};

// Planning graph over the non-obstacle cells of a grid. Topology and edge
// times are shared between copies; per-node risk layers are replaced wholesale
// by with_risk(), so a CostGraph value never changes after construction.
class CostGraph {
 public:
  CostGraph() = default;

  std::size_t node_count() const noexcept;
  // Undirected edge count.
  std::size_t edge_count() const noexcept;

  std::span<const Arc> arcs(NodeId u) const;
  const Arc* find_arc(NodeId u, NodeId v) const;

  const GridGeometry& geometry() const;
  NodeId node_at(Cell cell) const;
  Cell cell_of(NodeId u) const;
  Point centroid(NodeId u) const { return geometry().centroid(cell_of(u)); }
  double elevation(NodeId u) const;
  int land_cover(NodeId u) const;

  // Formation-dilated risk R_form and log-risk of each node.
  double cell_risk(NodeId u) const { return (*risk_form_)[static_cast<std::size_t>(u)]; }
  double log_risk(NodeId u) const { return (*log_risk_)[static_cast<std::size_t>(u)]; }
  std::span<const double> cell_risks() const { return *risk_form_; }
  std::span<const double> log_risks() const { return *log_risk_; }

  // Same topology with new per-node risk layers (node-indexed).
  CostGraph with_risk(std::vector<double> risk_form, std::vector<double> log_risk) const;

  // Subgraph induced by `nodes` (parent ids, duplicates ignored). Local node
  // ids follow the order of first appearance.
  struct Induced;
  Induced induced(std::span<const NodeId> nodes) const;

  bool shares_topology_with(const CostGraph& other) const noexcept { return topo_ == other.topo_; }

  struct Topology;

 private:
  friend CostGraph build_graph(const TerrainGrid&, const MobilityModel&);
  explicit CostGraph(std::shared_ptr<const Topology> topo);

  std::shared_ptr<const Topology> topo_;
  std::shared_ptr<const std::vector<double>> risk_form_;
  std::shared_ptr<const std::vector<double>> log_risk_;
};

struct CostGraph::Topology {
  GridGeometry geometry;
  std::vector<std::size_t> offsets;  // CSR, size node_count + 1
  std::vector<Arc> arcs;
  std::vector<std::uint32_t> node_cell;  // node -> linear cell index
  std::vector<NodeId> cell_node;         // linear cell index -> node or kNoNode
  std::vector<double> elevation;
  std::vector<int> land_cover;
};

struct CostGraph::Induced {
  CostGraph graph;
  std::vector<NodeId> to_parent;
  NodeId to_local(NodeId parent) const;

  std::vector<NodeId> local_of_parent;  // dense over parent nodes
};

// 8-connected graph over free cells. A diagonal is omitted when both cells
// flanking it are obstacles, as is any move steeper than mobility.max_slope.
// Node risk layers start at zero. Throws EmptyGraphError if every cell is an
// obstacle.
CostGraph build_graph(const TerrainGrid& grid, const MobilityModel& mobility);

}  // namespace argus
