#include "magma/assembly.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace magma {

ScalarField constant_field(double value) {
  return [value](const Point&) { return value; };
}

std::vector<int> BlockSystem::free_velocity_dofs() const {
  std::vector<int> free;
  free.reserve(dirichlet_mask.size());
  for (int i = 0; i < static_cast<int>(dirichlet_mask.size()); ++i) {
    if (!dirichlet_mask[i]) free.push_back(i);
  }
  return free;
}

namespace {

constexpr int kQuadPoints = 12;

// Reference basis data tabulated once at the quadrature points.
struct Tabulation {
  std::array<std::array<double, 6>, kQuadPoints> p2_values;
  std::array<std::array<Vec2, 6>, kQuadPoints> p2_grads;
  std::array<std::array<double, 3>, kQuadPoints> p1_values;
  std::array<Vec2, 3> p1_grads;

  Tabulation() {
    const auto rule = triangle_rule_degree6();
    for (int q = 0; q < kQuadPoints; ++q) {
      p2_values[q] = P2Basis::values(rule[q].xi, rule[q].eta);
      p2_grads[q] = P2Basis::reference_gradients(rule[q].xi, rule[q].eta);
      p1_values[q] = P1Basis::values(rule[q].xi, rule[q].eta);
    }
    p1_grads = P1Basis::reference_gradients();
  }
};

const Tabulation& tabulation() {
  static const Tabulation tab;
  return tab;
}

AffineCell cell_geometry(const Mesh& mesh, std::size_t c) {
  const auto& t = mesh.cells()[c];
  const auto& v = mesh.vertices();
  return AffineCell(v[t[0]], v[t[1]], v[t[2]]);
}

std::array<Vec2, 6> p2_physical_grads(const AffineCell& cell, int q) {
  std::array<Vec2, 6> g;
  const auto& ref = tabulation().p2_grads[q];
  for (int a = 0; a < 6; ++a) g[a] = cell.push_gradient(ref[a].x, ref[a].z);
  return g;
}

std::array<Vec2, 3> p1_physical_grads(const AffineCell& cell) {
  std::array<Vec2, 3> g;
  const auto& ref = tabulation().p1_grads;
  for (int a = 0; a < 3; ++a) g[a] = cell.push_gradient(ref[a].x, ref[a].z);
  return g;
}

double grad_component(const Vec2& g, int c) { return c == 0 ? g.x : g.z; }

// Local 12x12 velocity matrix, local index 2 a + c for node a, component c:
//   strain_w ε(u):ε(v) + div_w (∇·u)(∇·v) + grad_w ∇u:∇v
CsrMatrix assemble_velocity(const Mesh& mesh, const DofMap& velocity, double strain_w,
                            double div_w, double grad_w) {
  const auto rule = triangle_rule_degree6();
  std::vector<Triplet> triplets;
  triplets.reserve(mesh.num_cells() * 144);
  std::array<double, 144> local{};
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const AffineCell cell = cell_geometry(mesh, c);
    local.fill(0.0);
    for (int q = 0; q < kQuadPoints; ++q) {
      const double w = rule[q].weight * cell.area();
      const auto g = p2_physical_grads(cell, q);
      for (int a = 0; a < 6; ++a) {
        for (int b = 0; b < 6; ++b) {
          const double gg = g[a].x * g[b].x + g[a].z * g[b].z;
          for (int ci = 0; ci < 2; ++ci) {
            for (int cj = 0; cj < 2; ++cj) {
              // row: test function N_a e_ci, column: trial N_b e_cj
              const double cross = grad_component(g[a], cj) * grad_component(g[b], ci);
              const double div = grad_component(g[a], ci) * grad_component(g[b], cj);
              double v = 0.5 * strain_w * cross + div_w * div;
              if (ci == cj) v += (0.5 * strain_w + grad_w) * gg;
              local[(2 * a + ci) * 12 + 2 * b + cj] += w * v;
            }
          }
        }
      }
    }
    for (int i = 0; i < 12; ++i) {
      const int row = velocity.dof(c, i / 2, i % 2);
      for (int j = 0; j < 12; ++j) {
        triplets.push_back({row, velocity.dof(c, j / 2, j % 2), local[i * 12 + j]});
      }
    }
  }
  return CsrMatrix::from_triplets(velocity.n_dofs(), velocity.n_dofs(), std::move(triplets));
}

}  // namespace

CsrMatrix assemble_velocity_form(const Mesh& mesh, const DofMap& velocity, VelocityForm form) {
  if (velocity.kind() != SpaceKind::P2Vector) throw std::invalid_argument("velocity form needs P2 vector space");
  switch (form) {
    case VelocityForm::Strain: return assemble_velocity(mesh, velocity, 1.0, 0.0, 0.0);
    case VelocityForm::DivDiv: return assemble_velocity(mesh, velocity, 0.0, 1.0, 0.0);
    case VelocityForm::Gradient: return assemble_velocity(mesh, velocity, 0.0, 0.0, 1.0);
  }
  throw std::invalid_argument("unknown velocity form");
}

CsrMatrix assemble_A(const Mesh& mesh, const DofMap& velocity, double alpha) {
  if (!(alpha > -1.0)) {
    throw std::invalid_argument("assemble_A: alpha must exceed -1 for coercivity");
  }
  if (velocity.kind() != SpaceKind::P2Vector) throw std::invalid_argument("assemble_A needs P2 vector space");
  return assemble_velocity(mesh, velocity, 1.0, alpha, 0.0);
}

CsrMatrix assemble_B(const Mesh& mesh, const DofMap& velocity, const DofMap& pressure) {
  if (velocity.kind() != SpaceKind::P2Vector || pressure.kind() != SpaceKind::P1Scalar) {
    throw std::invalid_argument("assemble_B: expected P2 vector / P1 scalar spaces");
  }
  const auto rule = triangle_rule_degree6();
  const auto& tab = tabulation();
  std::vector<Triplet> triplets;
  triplets.reserve(mesh.num_cells() * 36);
  std::array<double, 36> local{};
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const AffineCell cell = cell_geometry(mesh, c);
    local.fill(0.0);
    for (int q = 0; q < kQuadPoints; ++q) {
      const double w = rule[q].weight * cell.area();
      const auto g = p2_physical_grads(cell, q);
      for (int i = 0; i < 3; ++i) {
        const double psi = tab.p1_values[q][i];
        for (int b = 0; b < 6; ++b) {
          local[i * 12 + 2 * b] -= w * psi * g[b].x;
          local[i * 12 + 2 * b + 1] -= w * psi * g[b].z;
        }
      }
    }
    for (int i = 0; i < 3; ++i) {
      const int row = pressure.dof(c, i);
      for (int j = 0; j < 12; ++j) {
        triplets.push_back({row, velocity.dof(c, j / 2, j % 2), local[i * 12 + j]});
      }
    }
  }
  return CsrMatrix::from_triplets(pressure.n_dofs(), velocity.n_dofs(), std::move(triplets));
}

CsrMatrix assemble_Ck(const Mesh& mesh, const DofMap& pressure, const ScalarField& k) {
  const auto rule = triangle_rule_degree6();
  std::vector<Triplet> triplets;
  triplets.reserve(mesh.num_cells() * 9);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const AffineCell cell = cell_geometry(mesh, c);
    double kint = 0.0;
    for (int q = 0; q < kQuadPoints; ++q) {
      const double kq = k(cell.map(rule[q].xi, rule[q].eta));
      if (!(kq >= 0.0)) {
        throw std::domain_error("assemble_Ck: permeability must be non-negative, got " +
                                std::to_string(kq));
      }
      kint += rule[q].weight * kq;
    }
    kint *= cell.area();
    const auto g = p1_physical_grads(cell);  // constant on the cell
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        triplets.push_back({pressure.dof(c, i), pressure.dof(c, j),
                            kint * (g[i].x * g[j].x + g[i].z * g[j].z)});
      }
    }
  }
  return CsrMatrix::from_triplets(pressure.n_dofs(), pressure.n_dofs(), std::move(triplets));
}

CsrMatrix assemble_Q(const Mesh& mesh, const DofMap& pressure) {
  const auto rule = triangle_rule_degree6();
  const auto& tab = tabulation();
  std::vector<Triplet> triplets;
  triplets.reserve(mesh.num_cells() * 9);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const AffineCell cell = cell_geometry(mesh, c);
    std::array<double, 9> local{};
    for (int q = 0; q < kQuadPoints; ++q) {
      const double w = rule[q].weight * cell.area();
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) local[i * 3 + j] += w * tab.p1_values[q][i] * tab.p1_values[q][j];
      }
    }
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        triplets.push_back({pressure.dof(c, i), pressure.dof(c, j), local[i * 3 + j]});
      }
    }
  }
  return CsrMatrix::from_triplets(pressure.n_dofs(), pressure.n_dofs(), std::move(triplets));
}

RhsVectors assemble_rhs(const Mesh& mesh, const DofMap& velocity, const DofMap& pressure,
                        const LoadTerms& loads) {
  const auto rule = triangle_rule_degree6();
  const auto& tab = tabulation();
  RhsVectors rhs{Vector(velocity.n_dofs(), 0.0), Vector(pressure.n_dofs(), 0.0)};
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const AffineCell cell = cell_geometry(mesh, c);
    const auto pg = p1_physical_grads(cell);
    for (int q = 0; q < kQuadPoints; ++q) {
      const double w = rule[q].weight * cell.area();
      const Point x = cell.map(rule[q].xi, rule[q].eta);
      Vec2 body{0.0, 0.0};
      if (loads.porosity) body.z += loads.porosity(x);
      if (loads.source) {
        const Vec2 s = loads.source(x);
        body.x += s.x;
        body.z += s.z;
      }
      if (body.x != 0.0 || body.z != 0.0) {
        for (int a = 0; a < 6; ++a) {
          const double n = w * tab.p2_values[q][a];
          rhs.f[velocity.dof(c, a, 0)] += n * body.x;
          rhs.f[velocity.dof(c, a, 1)] += n * body.z;
        }
      }
      if (loads.mass_permeability) {
        const double kq = loads.mass_permeability(x);
        for (int i = 0; i < 3; ++i) rhs.g[pressure.dof(c, i)] -= w * kq * pg[i].z;
      }
    }
  }
  return rhs;
}

BlockSystem assemble_system(const Mesh& mesh, const TaylorHoodSpaces& spaces, double alpha,
                            const ScalarField& k, const LoadTerms& loads) {
  BlockSystem s;
  s.alpha = alpha;
  s.A = assemble_A(mesh, spaces.velocity, alpha);
  s.B = assemble_B(mesh, spaces.velocity, spaces.pressure);
  s.Ck = assemble_Ck(mesh, spaces.pressure, k);
  s.Q = assemble_Q(mesh, spaces.pressure);
  auto rhs = assemble_rhs(mesh, spaces.velocity, spaces.pressure, loads);
  s.f = std::move(rhs.f);
  s.g = std::move(rhs.g);
  s.dirichlet_mask.assign(static_cast<std::size_t>(spaces.velocity.n_dofs()), 0);
  return s;
}

namespace {

template <typename Keep>
CsrMatrix filter(const CsrMatrix& m, Keep keep) {
  std::vector<int> row_ptr(static_cast<std::size_t>(m.rows()) + 1, 0);
  std::vector<int> col_idx;
  std::vector<double> values;
  col_idx.reserve(m.nnz());
  values.reserve(m.nnz());
  for (int i = 0; i < m.rows(); ++i) {
    for (int k = m.row_ptr()[i]; k < m.row_ptr()[i + 1]; ++k) {
      const int j = m.col_idx()[k];
      double v = m.values()[k];
      if (keep(i, j, v)) {
        col_idx.push_back(j);
        values.push_back(v);
      }
    }
    row_ptr[i + 1] = static_cast<int>(col_idx.size());
  }
  return CsrMatrix(m.rows(), m.cols(), std::move(row_ptr), std::move(col_idx), std::move(values));
}

}  // namespace

BlockSystem apply_dirichlet(BlockSystem system, const Mesh& mesh, const DofMap& velocity,
                            std::span<const DirichletCondition> conditions) {
  const int nu = system.n_u();
  Vector lift(nu, 0.0);
  std::vector<char> mask(nu, 0);
  for (const auto& bc : conditions) {
    if (bc.tag != BoundaryTag::All && !mesh.has_tag(bc.tag)) {
      throw std::invalid_argument("apply_dirichlet: mesh has no facets tagged " +
                                  std::string(to_string(bc.tag)));
    }
    for (int node : velocity.boundary_nodes(mesh, bc.tag)) {
      const Vec2 value = bc.value(velocity.nodes()[node]);
      if (!std::isfinite(value.x) || !std::isfinite(value.z)) {
        throw std::domain_error("apply_dirichlet: boundary data not finite at node " +
                                std::to_string(node));
      }
      lift[2 * node] = value.x;
      lift[2 * node + 1] = value.z;
      mask[2 * node] = mask[2 * node + 1] = 1;
    }
  }
  for (int i = 0; i < nu; ++i) {
    if (system.dirichlet_mask[i]) mask[i] = 1;
  }

  const Vector a_lift = system.A * lift;
  const Vector b_lift = system.B * lift;
  for (int i = 0; i < nu; ++i) system.f[i] = mask[i] ? lift[i] : system.f[i] - a_lift[i];
  for (int i = 0; i < system.n_p(); ++i) system.g[i] -= b_lift[i];

  system.A = filter(system.A, [&](int i, int j, double& v) {
    if (!mask[i] && !mask[j]) return true;
    if (i == j) {
      v = 1.0;
      return true;
    }
    return false;
  });
  system.B = filter(system.B, [&](int, int j, double&) { return !mask[j]; });
  system.dirichlet_mask = std::move(mask);

  bool all_covered = true;
  for (const auto& facet : mesh.boundary_facets()) {
    bool covered = false;
    for (const auto& bc : conditions) covered |= bc.tag == BoundaryTag::All || bc.tag == facet.tag;
    all_covered &= covered;
  }
  system.has_pressure_nullspace = all_covered;
  if (all_covered) {
    double total = 0.0;
    for (double v : system.g) total += v;
    system.compatibility_defect = total;
    const double mean = total / system.n_p();
    for (double& v : system.g) v -= mean;
  }
  return system;
}

Vector interpolate(const DofMap& velocity, const VectorField& field) {
  Vector u(velocity.n_dofs());
  for (int n = 0; n < velocity.n_nodes(); ++n) {
    const Vec2 v = field(velocity.nodes()[n]);
    u[2 * n] = v.x;
    u[2 * n + 1] = v.z;
  }
  return u;
}

Vector interpolate(const DofMap& scalar, const ScalarField& field) {
  Vector p(scalar.n_dofs());
  for (int n = 0; n < scalar.n_nodes(); ++n) p[n] = field(scalar.nodes()[n]);
  return p;
}

}  // namespace magma
