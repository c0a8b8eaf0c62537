#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

namespace magma {

/// Point in the (x, z) plane; z is the vertical coordinate.
struct Point {
  double x = 0.0;
  double z = 0.0;
};

/// Boundary part a facet belongs to. The wedge uses the first three
/// (slab, overplate, open side/bottom); the unit square tags everything All.
enum class BoundaryTag { Slab, Overplate, Open, All };

std::string_view to_string(BoundaryTag tag);

struct BoundaryFacet {
  std::array<int, 2> vertices;
  BoundaryTag tag;
  int cell;  // the unique cell owning this facet
};

/// Immutable triangulation with tagged boundary facets.
///
/// Cells are counter-clockwise vertex triples. The constructor derives the
/// owning cell of every facet and rejects inconsistent input (inverted cells,
/// facets that are not on the boundary, boundary edges left untagged).
class Mesh {
public:
  Mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> cells,
       std::vector<std::pair<std::array<int, 2>, BoundaryTag>> facets);

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& cells() const { return cells_; }
  const std::vector<BoundaryFacet>& boundary_facets() const { return facets_; }

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_cells() const { return cells_.size(); }

  double signed_area(std::size_t cell) const;
  double total_area() const;

  bool has_tag(BoundaryTag tag) const;

private:
  std::vector<Point> vertices_;
  std::vector<std::array<int, 3>> cells_;
  std::vector<BoundaryFacet> facets_;
};

/// Structured n x n unit square, each square split along the
/// lower-left to upper-right diagonal. All boundary facets tagged All.
Mesh build_unit_square(int n);

/// Structured mesh of the 2D subduction wedge: the unit square mapped by
/// x = (1 - eta) + xi (0.5 + eta), z = eta onto the quadrilateral
/// (0,1), (1.5,1), (1.5,0), (1,0). Facets on x + z = 1 are Slab, on z = 1
/// Overplate, on x = 1.5 and z = 0 Open.
Mesh build_wedge2d(int n);

/// Geometric tolerance used when classifying boundary facets.
inline constexpr double kGeometryTolerance = 1e-10;

}  // namespace magma
