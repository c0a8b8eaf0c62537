#include "magma/problems.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace magma {

NondimensionalScalars nondimensionalize(const PhysicalParams& p) {
  for (double v : {p.eta, p.zeta, p.mu, p.kappa0, p.phi0, p.delta_rho, p.g, p.H}) {
    if (!(v > 0.0)) throw std::invalid_argument("physical parameters must be positive");
  }
  const double r_zeta = p.zeta / p.eta;
  NondimensionalScalars s{};
  s.alpha = (r_zeta - 2.0 / 3.0) / 2.0;
  s.u0 = p.delta_rho * p.g * p.H * p.H / (2.0 * p.eta);
  s.delta = std::sqrt((r_zeta + 4.0 / 3.0) * p.kappa0 * p.eta / p.mu);
  s.R = s.delta / p.H;
  return s;
}

MmsSolution mms_exact(double x, double z, double k) {
  using std::numbers::pi;
  const double p = -std::cos(4 * pi * x) * std::cos(2 * pi * z);
  const double dpdx = 4 * pi * std::sin(4 * pi * x) * std::cos(2 * pi * z);
  const double dpdz = 2 * pi * std::cos(4 * pi * x) * std::sin(2 * pi * z);
  return {k * dpdx + std::sin(pi * x) * std::sin(2 * pi * z) + 2.0,
          k * dpdz + 0.5 * std::cos(pi * x) * std::cos(2 * pi * z) + 2.0, p};
}

ScalarField mms_kfield(double k_star, double k_sup) {
  if (!(k_star <= k_sup)) throw std::invalid_argument("mms_kfield: k_star must not exceed k_sup");
  const double amp = (k_sup - k_star) / (4.0 * std::tanh(5.0));
  const double mid = 0.5 * (k_sup + k_star);
  return [amp, mid](const Point& pt) {
    return amp * (std::tanh(10 * pt.x - 5) + std::tanh(10 * pt.z - 5)) + mid;
  };
}

VectorField mms_source(double alpha, double k_star, double k_sup) {
  return [=](const Point& pt) { return mms_source_value(pt.x, pt.z, alpha, k_star, k_sup); };
}

VectorField mms_velocity(double k_star, double k_sup) {
  auto k = mms_kfield(k_star, k_sup);
  return [k](const Point& pt) {
    const auto s = mms_exact(pt.x, pt.z, k(pt));
    return Vec2{s.ux, s.uz};
  };
}

ScalarField mms_pressure() {
  return [](const Point& pt) { return mms_exact(pt.x, pt.z, 0.0).p; };
}

CornerFlowConstants corner_flow_constants(double beta) {
  const double s = std::sin(beta);
  const double denom = beta * beta - s * s;
  return {beta * s / denom, (beta * std::cos(beta) - s) / denom};
}

Vec2 corner_velocity(double x, double z) {
  if (!(x > 0.0)) throw std::domain_error("corner_velocity: undefined at x <= 0");
  static const CornerFlowConstants cd = corner_flow_constants(std::numbers::pi / 4);
  const double theta = -std::atan((z - 1.0) / x);
  const double st = std::sin(theta);
  const double ct = std::cos(theta);
  const double ur = cd.C * theta * st + cd.D * (st + theta * ct);
  const double ut = cd.C * (st - theta * ct) + cd.D * theta * st;
  return {ct * ur + st * ut, -st * ur + ct * ut};
}

ScalarField wedge_kfield() {
  return [](const Point& pt) { return 0.9 * (1.0 + std::tanh(-2.0 * std::hypot(pt.x, pt.z))); };
}

namespace {

Vec2 velocity_at(const DofMap& vel, std::size_t cell, const Vector& u, double xi, double eta) {
  const auto phi = P2Basis::values(xi, eta);
  Vec2 out;
  for (int a = 0; a < 6; ++a) {
    out.x += phi[a] * u[vel.dof(cell, a, 0)];
    out.z += phi[a] * u[vel.dof(cell, a, 1)];
  }
  return out;
}

double pressure_at(const DofMap& pre, std::size_t cell, const Vector& p, double xi, double eta) {
  const auto psi = P1Basis::values(xi, eta);
  double out = 0.0;
  for (int a = 0; a < 3; ++a) out += psi[a] * p[pre.dof(cell, a)];
  return out;
}

AffineCell cell_geometry(const Mesh& mesh, std::size_t c) {
  const auto& v = mesh.vertices();
  const auto& t = mesh.cells()[c];
  return AffineCell(v[t[0]], v[t[1]], v[t[2]]);
}

}  // namespace

std::vector<Vec2> fluid_velocity(const Mesh& mesh, const TaylorHoodSpaces& spaces, const Vector& u,
                                 const Vector& p, const ScalarField& k, const ScalarField& phi) {
  std::vector<Vec2> out(mesh.num_cells());
  const auto grads = P1Basis::reference_gradients();
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const AffineCell geo = cell_geometry(mesh, c);
    const Point centroid = geo.map(1.0 / 3.0, 1.0 / 3.0);
    const double porosity = phi(centroid);
    if (!(porosity > 0.0)) throw std::domain_error("fluid_velocity: porosity must be positive");
    Vec2 grad_p;
    for (int a = 0; a < 3; ++a) {
      const Vec2 g = geo.push_gradient(grads[a].x, grads[a].z);
      const double pa = p[spaces.pressure.dof(c, a)];
      grad_p.x += g.x * pa;
      grad_p.z += g.z * pa;
    }
    const Vec2 us = velocity_at(spaces.velocity, c, u, 1.0 / 3.0, 1.0 / 3.0);
    const double ratio = k(centroid) / porosity;
    out[c] = {us.x - ratio * grad_p.x, us.z - ratio * (grad_p.z - 1.0)};
  }
  return out;
}

ErrorNorms error_norms(const Mesh& mesh, const TaylorHoodSpaces& spaces, const Vector& u,
                       const Vector& p, const VectorField& exact_u, const ScalarField& exact_p) {
  const auto rule = triangle_rule_degree6();
  double mean_diff = 0.0;
  double area = 0.0;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const AffineCell geo = cell_geometry(mesh, c);
    for (const auto& q : rule) {
      const double w = q.weight * geo.area();
      mean_diff += w * (pressure_at(spaces.pressure, c, p, q.xi, q.eta) - exact_p(geo.map(q.xi, q.eta)));
      area += w;
    }
  }
  mean_diff /= area;

  double eu = 0.0;
  double ep = 0.0;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const AffineCell geo = cell_geometry(mesh, c);
    for (const auto& q : rule) {
      const double w = q.weight * geo.area();
      const Point x = geo.map(q.xi, q.eta);
      const Vec2 uh = velocity_at(spaces.velocity, c, u, q.xi, q.eta);
      const Vec2 ue = exact_u(x);
      eu += w * ((uh.x - ue.x) * (uh.x - ue.x) + (uh.z - ue.z) * (uh.z - ue.z));
      const double dp = pressure_at(spaces.pressure, c, p, q.xi, q.eta) - mean_diff - exact_p(x);
      ep += w * dp * dp;
    }
  }
  return {std::sqrt(eu), std::sqrt(ep)};
}

}  // namespace magma
