#include "magma/dof_map.hpp"

#include "magma/fe.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_map>

namespace magma {

namespace {

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

}  // namespace

DofMap DofMap::p1_scalar(const Mesh& mesh) {
  DofMap map;
  map.kind_ = SpaceKind::P1Scalar;
  map.nodes_ = mesh.vertices();
  map.n_dofs_ = static_cast<int>(mesh.num_vertices());
  map.cell_nodes_.reserve(mesh.num_cells() * 3);
  for (const auto& c : mesh.cells()) map.cell_nodes_.insert(map.cell_nodes_.end(), c.begin(), c.end());
  return map;
}

DofMap DofMap::p2_vector(const Mesh& mesh) {
  DofMap map;
  map.kind_ = SpaceKind::P2Vector;
  map.nodes_ = mesh.vertices();
  const int nv = static_cast<int>(mesh.num_vertices());

  std::unordered_map<std::uint64_t, int> edge_node;
  edge_node.reserve(mesh.num_cells() * 2);
  map.cell_nodes_.reserve(mesh.num_cells() * 6);
  for (const auto& c : mesh.cells()) {
    map.cell_nodes_.insert(map.cell_nodes_.end(), c.begin(), c.end());
    for (const auto& [a, b] : kP2LocalEdges) {
      auto [it, inserted] = edge_node.try_emplace(edge_key(c[a], c[b]), 0);
      if (inserted) {
        it->second = static_cast<int>(map.nodes_.size());
        const Point& pa = mesh.vertices()[c[a]];
        const Point& pb = mesh.vertices()[c[b]];
        map.nodes_.push_back({0.5 * (pa.x + pb.x), 0.5 * (pa.z + pb.z)});
      }
      map.cell_nodes_.push_back(it->second);
    }
  }
  map.n_edges_ = static_cast<int>(map.nodes_.size()) - nv;
  map.n_dofs_ = 2 * static_cast<int>(map.nodes_.size());

  map.facet_edge_node_.reserve(mesh.boundary_facets().size());
  for (const auto& f : mesh.boundary_facets()) {
    map.facet_edge_node_.push_back(edge_node.at(edge_key(f.vertices[0], f.vertices[1])));
  }
  return map;
}

std::vector<int> DofMap::boundary_nodes(const Mesh& mesh, BoundaryTag tag) const {
  std::vector<int> nodes;
  const auto& facets = mesh.boundary_facets();
  for (std::size_t i = 0; i < facets.size(); ++i) {
    if (tag != BoundaryTag::All && facets[i].tag != tag) continue;
    nodes.push_back(facets[i].vertices[0]);
    nodes.push_back(facets[i].vertices[1]);
    if (kind_ == SpaceKind::P2Vector) nodes.push_back(facet_edge_node_[i]);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return nodes;
}

std::vector<int> DofMap::boundary_dofs(const Mesh& mesh, BoundaryTag tag) const {
  std::vector<int> dofs;
  for (int node : boundary_nodes(mesh, tag)) {
    for (int c = 0; c < components(); ++c) dofs.push_back(node * components() + c);
  }
  return dofs;
}

}  // namespace magma
