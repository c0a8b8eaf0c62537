#pragma once

#include <array>
#include <span>

#include "magma/mesh.hpp"

namespace magma {

struct QuadraturePoint {
  double xi;
  double eta;
  double weight;  // weights sum to 1 (multiply by cell area)
};

/// 12-point symmetric rule on the reference triangle, exact for
/// polynomials of total degree 6.
std::span<const QuadraturePoint> triangle_rule_degree6();

struct Vec2 {
  double x = 0.0;
  double z = 0.0;
};

/// Affine map of a triangle. Reference coordinates (xi, eta) with
/// barycentrics (1 - xi - eta, xi, eta) attached to vertices 0, 1, 2.
class AffineCell {
public:
  AffineCell(const Point& a, const Point& b, const Point& c);

  double area() const { return area_; }
  Point map(double xi, double eta) const;
  /// Physical gradient from reference gradient (d/dxi, d/deta).
  Vec2 push_gradient(double dxi, double deta) const;

private:
  Point origin_;
  double j00_, j01_, j10_, j11_;          // d(x,z)/d(xi,eta)
  double inv00_, inv01_, inv10_, inv11_;  // inverse Jacobian
  double area_;
};

/// P1 Lagrange basis: value and reference gradient of the three hat functions.
struct P1Basis {
  static std::array<double, 3> values(double xi, double eta);
  static std::array<Vec2, 3> reference_gradients();
};

/// P2 Lagrange basis. Local ordering: vertices 0, 1, 2, then the midpoints
/// of edges (1,2), (2,0), (0,1).
struct P2Basis {
  static std::array<double, 6> values(double xi, double eta);
  static std::array<Vec2, 6> reference_gradients(double xi, double eta);
};

/// Local vertex pairs of the P2 edge nodes, in local dof order 3, 4, 5.
inline constexpr std::array<std::array<int, 2>, 3> kP2LocalEdges{{{1, 2}, {2, 0}, {0, 1}}};

}  // namespace magma
