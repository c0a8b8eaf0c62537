#include "magma/fe.hpp"

#include <stdexcept>

namespace magma {

namespace {

// Dunavant degree-6 rule: three orbits (3 + 3 + 6 points).
constexpr double kW1 = 0.116786275726379;
constexpr double kA1 = 0.501426509658179;
constexpr double kB1 = 0.249286745170910;
constexpr double kW2 = 0.050844906370207;
constexpr double kA2 = 0.873821971016996;
constexpr double kB2 = 0.063089014491502;
constexpr double kW3 = 0.082851075618374;
constexpr double kA3 = 0.053145049844817;
constexpr double kB3 = 0.310352451033784;
constexpr double kC3 = 0.636502499121399;

// (xi, eta) are barycentrics 1 and 2; barycentric 0 is implied.
constexpr std::array<QuadraturePoint, 12> kRule6{{
    {kB1, kB1, kW1}, {kA1, kB1, kW1}, {kB1, kA1, kW1},
    {kB2, kB2, kW2}, {kA2, kB2, kW2}, {kB2, kA2, kW2},
    {kB3, kC3, kW3}, {kC3, kB3, kW3}, {kA3, kC3, kW3},
    {kC3, kA3, kW3}, {kA3, kB3, kW3}, {kB3, kA3, kW3},
}};

}  // namespace

std::span<const QuadraturePoint> triangle_rule_degree6() { return kRule6; }

AffineCell::AffineCell(const Point& a, const Point& b, const Point& c) : origin_(a) {
  j00_ = b.x - a.x;
  j01_ = c.x - a.x;
  j10_ = b.z - a.z;
  j11_ = c.z - a.z;
  const double det = j00_ * j11_ - j01_ * j10_;
  if (!(det > 0.0)) throw std::invalid_argument("AffineCell: degenerate or inverted cell");
  inv00_ = j11_ / det;
  inv01_ = -j01_ / det;
  inv10_ = -j10_ / det;
  inv11_ = j00_ / det;
  area_ = 0.5 * det;
}

Point AffineCell::map(double xi, double eta) const {
  return {origin_.x + j00_ * xi + j01_ * eta, origin_.z + j10_ * xi + j11_ * eta};
}

Vec2 AffineCell::push_gradient(double dxi, double deta) const {
  // grad_x = J^{-T} grad_ref
  return {inv00_ * dxi + inv10_ * deta, inv01_ * dxi + inv11_ * deta};
}

std::array<double, 3> P1Basis::values(double xi, double eta) {
  return {1.0 - xi - eta, xi, eta};
}

std::array<Vec2, 3> P1Basis::reference_gradients() {
  return {Vec2{-1.0, -1.0}, Vec2{1.0, 0.0}, Vec2{0.0, 1.0}};
}

std::array<double, 6> P2Basis::values(double xi, double eta) {
  const double l0 = 1.0 - xi - eta;
  const double l1 = xi;
  const double l2 = eta;
  return {l0 * (2.0 * l0 - 1.0), l1 * (2.0 * l1 - 1.0), l2 * (2.0 * l2 - 1.0),
          4.0 * l1 * l2,         4.0 * l2 * l0,         4.0 * l0 * l1};
}

std::array<Vec2, 6> P2Basis::reference_gradients(double xi, double eta) {
  const double l0 = 1.0 - xi - eta;
  const double l1 = xi;
  const double l2 = eta;
  // d(l0, l1, l2)/dxi = (-1, 1, 0), d/deta = (-1, 0, 1)
  return {
      Vec2{-(4.0 * l0 - 1.0), -(4.0 * l0 - 1.0)},
      Vec2{4.0 * l1 - 1.0, 0.0},
      Vec2{0.0, 4.0 * l2 - 1.0},
      Vec2{4.0 * l2, 4.0 * l1},
      Vec2{-4.0 * l2, 4.0 * (l0 - l2)},
      Vec2{4.0 * (l0 - l1), -4.0 * l1},
  };
}

}  // namespace magma
