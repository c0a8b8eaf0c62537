#include "magma/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace magma {

std::string_view to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::Slab: return "slab";
    case BoundaryTag::Overplate: return "overplate";
    case BoundaryTag::Open: return "open";
    case BoundaryTag::All: return "all";
  }
  return "unknown";
}

namespace {

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

}  // namespace

Mesh::Mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> cells,
           std::vector<std::pair<std::array<int, 2>, BoundaryTag>> facets)
    : vertices_(std::move(vertices)), cells_(std::move(cells)) {
  const int nv = static_cast<int>(vertices_.size());
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    for (int v : cells_[c]) {
      if (v < 0 || v >= nv) throw std::invalid_argument("mesh: cell references missing vertex");
    }
    if (!(signed_area(c) > 0.0)) {
      throw std::invalid_argument("mesh: cell " + std::to_string(c) +
                                  " has non-positive signed area");
    }
  }

  // edge -> (owning cell, number of cells sharing it)
  std::unordered_map<std::uint64_t, std::pair<int, int>> edges;
  edges.reserve(cells_.size() * 2);
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    const auto& t = cells_[c];
    for (int e = 0; e < 3; ++e) {
      auto [it, inserted] = edges.try_emplace(edge_key(t[e], t[(e + 1) % 3]),
                                              static_cast<int>(c), 0);
      ++it->second.second;
      if (it->second.second > 2) throw std::invalid_argument("mesh: edge shared by more than two cells");
    }
  }

  std::size_t boundary_edges = 0;
  for (const auto& [key, info] : edges) {
    if (info.second == 1) ++boundary_edges;
  }

  std::unordered_map<std::uint64_t, bool> seen;
  facets_.reserve(facets.size());
  for (const auto& [verts, tag] : facets) {
    const auto key = edge_key(verts[0], verts[1]);
    auto it = edges.find(key);
    if (it == edges.end() || it->second.second != 1) {
      throw std::invalid_argument("mesh: tagged facet is not a boundary edge");
    }
    if (!seen.emplace(key, true).second) {
      throw std::invalid_argument("mesh: boundary facet tagged twice");
    }
    facets_.push_back({verts, tag, it->second.first});
  }
  if (facets_.size() != boundary_edges) {
    throw std::invalid_argument("mesh: " + std::to_string(boundary_edges - facets_.size()) +
                                " boundary edges carry no tag");
  }
}

double Mesh::signed_area(std::size_t cell) const {
  const auto& t = cells_[cell];
  const Point& a = vertices_[t[0]];
  const Point& b = vertices_[t[1]];
  const Point& c = vertices_[t[2]];
  return 0.5 * ((b.x - a.x) * (c.z - a.z) - (c.x - a.x) * (b.z - a.z));
}

double Mesh::total_area() const {
  double area = 0.0;
  for (std::size_t c = 0; c < cells_.size(); ++c) area += signed_area(c);
  return area;
}

bool Mesh::has_tag(BoundaryTag tag) const {
  return std::any_of(facets_.begin(), facets_.end(),
                     [tag](const BoundaryFacet& f) { return f.tag == tag; });
}

namespace {

struct Structured {
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> cells;
  std::vector<std::array<int, 2>> boundary;
};

// Vertex (i, j) has index j (n+1) + i and reference coordinates (i/n, j/n).
Structured structured_square(int n) {
  Structured s;
  const int m = n + 1;
  s.vertices.reserve(static_cast<std::size_t>(m) * m);
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      s.vertices.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
    }
  }
  s.cells.reserve(2 * static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = j * m + i;
      const int v10 = v00 + 1;
      const int v01 = v00 + m;
      const int v11 = v01 + 1;
      s.cells.push_back({v00, v10, v11});
      s.cells.push_back({v00, v11, v01});
    }
  }
  for (int i = 0; i < n; ++i) {
    s.boundary.push_back({i, i + 1});                          // bottom
    s.boundary.push_back({n * m + i, n * m + i + 1});          // top
    s.boundary.push_back({i * m, (i + 1) * m});                // left
    s.boundary.push_back({i * m + n, (i + 1) * m + n});        // right
  }
  return s;
}

}  // namespace

Mesh build_unit_square(int n) {
  if (n < 1) throw std::invalid_argument("build_unit_square: n must be >= 1");
  auto s = structured_square(n);
  std::vector<std::pair<std::array<int, 2>, BoundaryTag>> facets;
  facets.reserve(s.boundary.size());
  for (const auto& f : s.boundary) facets.emplace_back(f, BoundaryTag::All);
  return Mesh(std::move(s.vertices), std::move(s.cells), std::move(facets));
}

Mesh build_wedge2d(int n) {
  if (n < 2) throw std::invalid_argument("build_wedge2d: n must be >= 2");
  auto s = structured_square(n);
  for (auto& p : s.vertices) {
    const double xi = p.x;
    const double eta = p.z;
    p = {(1.0 - eta) + xi * (0.5 + eta), eta};
  }

  auto classify = [&](const Point& a, const Point& b) {
    auto on = [](double v, double target) { return std::abs(v - target) < kGeometryTolerance; };
    if (on(a.x + a.z, 1.0) && on(b.x + b.z, 1.0)) return BoundaryTag::Slab;
    if (on(a.z, 1.0) && on(b.z, 1.0)) return BoundaryTag::Overplate;
    if ((on(a.x, 1.5) && on(b.x, 1.5)) || (on(a.z, 0.0) && on(b.z, 0.0))) return BoundaryTag::Open;
    throw std::logic_error("build_wedge2d: boundary facet matches no boundary part");
  };

  std::vector<std::pair<std::array<int, 2>, BoundaryTag>> facets;
  facets.reserve(s.boundary.size());
  for (const auto& f : s.boundary) {
    facets.emplace_back(f, classify(s.vertices[f[0]], s.vertices[f[1]]));
  }
  return Mesh(std::move(s.vertices), std::move(s.cells), std::move(facets));
}

}  // namespace magma
