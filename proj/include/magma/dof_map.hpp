#pragma once

#include <array>
#include <span>
#include <vector>

#include "magma/mesh.hpp"

namespace magma {

enum class SpaceKind { P2Vector, P1Scalar };

/// Degree-of-freedom numbering for the Taylor-Hood pair.
///
/// P1 scalar: one dof per vertex, numbered as the vertices.
/// P2 vector: scalar nodes are the vertices followed by the edges (edges
/// numbered in order of first appearance over the cells); the vector dof of
/// node `s`, component `c` is 2 s + c (interleaved).
class DofMap {
public:
  static DofMap p2_vector(const Mesh& mesh);
  static DofMap p1_scalar(const Mesh& mesh);

  SpaceKind kind() const { return kind_; }
  int n_dofs() const { return n_dofs_; }
  int n_nodes() const { return static_cast<int>(nodes_.size()); }
  int components() const { return kind_ == SpaceKind::P2Vector ? 2 : 1; }
  int nodes_per_cell() const { return kind_ == SpaceKind::P2Vector ? 6 : 3; }

  /// Scalar node indices of `cell` in local basis order.
  std::span<const int> cell_nodes(std::size_t cell) const {
    const std::size_t k = static_cast<std::size_t>(nodes_per_cell());
    return {cell_nodes_.data() + cell * k, k};
  }
  /// Global dof of local node `local`, component `comp`.
  int dof(std::size_t cell, int local, int comp = 0) const {
    return cell_nodes(cell)[local] * components() + comp;
  }

  /// Node coordinates (vertices, then edge midpoints).
  const std::vector<Point>& nodes() const { return nodes_; }

  /// Sorted scalar node indices lying on facets with the given tag
  /// (All selects every boundary facet).
  std::vector<int> boundary_nodes(const Mesh& mesh, BoundaryTag tag) const;
  /// Sorted dofs (all components) on facets with the given tag.
  std::vector<int> boundary_dofs(const Mesh& mesh, BoundaryTag tag) const;

  int n_edges() const { return n_edges_; }

private:
  SpaceKind kind_ = SpaceKind::P1Scalar;
  int n_dofs_ = 0;
  int n_edges_ = 0;
  std::vector<int> cell_nodes_;
  std::vector<Point> nodes_;
  // P2 only: edge node index for each boundary facet, aligned with mesh facets
  std::vector<int> facet_edge_node_;
};

}  // namespace magma
