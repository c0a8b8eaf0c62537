#pragma once

#include <functional>
#include <span>
#include <vector>

#include "magma/csr_matrix.hpp"
#include "magma/dof_map.hpp"
#include "magma/fe.hpp"
#include "magma/mesh.hpp"

namespace magma {

using ScalarField = std::function<double(const Point&)>;
using VectorField = std::function<Vec2(const Point&)>;

ScalarField constant_field(double value);

/// Velocity (P2 vector) and pressure (P1) spaces on one mesh.
struct TaylorHoodSpaces {
  DofMap velocity;
  DofMap pressure;

  static TaylorHoodSpaces build(const Mesh& mesh) {
    return {DofMap::p2_vector(mesh), DofMap::p1_scalar(mesh)};
  }
  int total_dofs() const { return velocity.n_dofs() + pressure.n_dofs(); }
};

/// Saddle-point system [A Bᵀ; B -C_k] [u; p] = [f; g] plus the pressure
/// mass matrix Q used by the preconditioner and the nullspace projection.
struct BlockSystem {
  CsrMatrix A;
  CsrMatrix B;
  CsrMatrix Ck;
  CsrMatrix Q;
  Vector f;
  Vector g;
  double alpha = 0.0;
  bool has_pressure_nullspace = false;
  /// 1 for velocity dofs eliminated by a Dirichlet condition.
  std::vector<char> dirichlet_mask;
  /// Sum of g removed to make the pressure equation consistent with the
  /// constant-pressure nullspace (discrete boundary flux of the lifting).
  double compatibility_defect = 0.0;

  int n_u() const { return A.rows(); }
  int n_p() const { return Q.rows(); }
  int size() const { return n_u() + n_p(); }
  std::vector<int> free_velocity_dofs() const;
};

/// Bilinear forms on the P2 velocity space.
enum class VelocityForm {
  Strain,    // ε(u):ε(v)
  DivDiv,    // (∇·u)(∇·v)
  Gradient,  // ∇u:∇v
};

CsrMatrix assemble_velocity_form(const Mesh& mesh, const DofMap& velocity, VelocityForm form);

/// a(u, v) = ∫ ε(u):ε(v) + α (∇·u)(∇·v). Requires α > -1.
CsrMatrix assemble_A(const Mesh& mesh, const DofMap& velocity, double alpha);

/// b(p, v) = -∫ p ∇·v, stored as n_p x n_u.
CsrMatrix assemble_B(const Mesh& mesh, const DofMap& velocity, const DofMap& pressure);

/// c(p, q) = ∫ k ∇p·∇q. Throws std::domain_error if k is negative (or NaN)
/// at any quadrature point.
CsrMatrix assemble_Ck(const Mesh& mesh, const DofMap& pressure, const ScalarField& k);

/// P1 mass matrix.
CsrMatrix assemble_Q(const Mesh& mesh, const DofMap& pressure);

/// Right-hand side contributions; unset functions are treated as absent.
struct LoadTerms {
  ScalarField porosity;           // f += ∫ φ e₃·v
  ScalarField mass_permeability;  // g -= ∫ k e₃·∇q
  VectorField source;             // f += ∫ s·v
};

struct RhsVectors {
  Vector f;
  Vector g;
};

RhsVectors assemble_rhs(const Mesh& mesh, const DofMap& velocity, const DofMap& pressure,
                        const LoadTerms& loads);

/// Assembles every block and the load vectors, no boundary conditions.
BlockSystem assemble_system(const Mesh& mesh, const TaylorHoodSpaces& spaces, double alpha,
                            const ScalarField& k, const LoadTerms& loads);

struct DirichletCondition {
  BoundaryTag tag;
  VectorField value;
};

/// Symmetric elimination of velocity Dirichlet conditions. Conditions are
/// applied in order; a node shared by two tags takes the value of the later
/// one. Rows and columns of A become identity, B columns are zeroed, and the
/// lifting is moved to f and g. If every boundary facet carries a condition
/// the system is flagged with a constant-pressure nullspace and the mean of
/// g is removed so the right-hand side is consistent.
BlockSystem apply_dirichlet(BlockSystem system, const Mesh& mesh, const DofMap& velocity,
                            std::span<const DirichletCondition> conditions);

/// Nodal interpolation of a vector field into the P2 space.
Vector interpolate(const DofMap& velocity, const VectorField& field);
/// Nodal interpolation of a scalar field into a scalar space.
Vector interpolate(const DofMap& scalar, const ScalarField& field);

}  // namespace magma
