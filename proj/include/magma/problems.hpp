#pragma once

#include <vector>

#include "magma/assembly.hpp"
#include "magma/fe.hpp"
#include "magma/mesh.hpp"

namespace magma {

/// Dimensional material and scale parameters (SI units).
struct PhysicalParams {
  double eta;         // matrix shear viscosity
  double zeta;        // matrix bulk viscosity
  double mu;          // melt viscosity
  double kappa0;      // reference permeability
  double phi0;        // reference porosity
  double delta_rho;   // density contrast
  double g;           // gravitational acceleration
  double H;           // length scale
};

struct NondimensionalScalars {
  double alpha;  // (r_zeta - 2/3) / 2
  double u0;     // velocity scale delta_rho g H^2 / (2 eta)
  double delta;  // compaction length
  double R;      // delta / H
};

/// Throws std::invalid_argument unless every parameter is positive.
NondimensionalScalars nondimensionalize(const PhysicalParams& params);

struct MmsSolution {
  double ux;
  double uz;
  double p;
};

/// Manufactured solution at (x, z) for a permeability value k there.
MmsSolution mms_exact(double x, double z, double k);

/// Smooth tanh permeability ranging over [k_star, k_sup] on the unit square.
ScalarField mms_kfield(double k_star, double k_sup);

/// Momentum source making the manufactured solution exact for the tanh
/// permeability field. Generated code, see tools/gen_mms_source.py.
Vec2 mms_source_value(double x, double z, double alpha, double k_star, double k_sup);
VectorField mms_source(double alpha, double k_star, double k_sup);

/// Exact velocity and pressure of the manufactured problem as fields.
VectorField mms_velocity(double k_star, double k_sup);
ScalarField mms_pressure();

struct CornerFlowConstants {
  double C;
  double D;
};

CornerFlowConstants corner_flow_constants(double beta);

/// Analytic corner-flow velocity for the wedge with slab dip pi/4.
/// Throws std::domain_error at x <= 0.
Vec2 corner_velocity(double x, double z);

/// k = 0.9 (1 + tanh(-2 r)), r = |(x, z)|.
ScalarField wedge_kfield();

/// Cellwise fluid velocity u - (k / phi)(grad p - e_z), evaluated at the
/// cell centroids. Throws std::domain_error where phi <= 0.
std::vector<Vec2> fluid_velocity(const Mesh& mesh, const TaylorHoodSpaces& spaces, const Vector& u,
                                 const Vector& p, const ScalarField& k, const ScalarField& phi);

struct ErrorNorms {
  double velocity;
  double pressure;
};

/// L2 errors by quadrature. The pressure error is taken after removing the
/// mean difference between discrete and exact pressure.
ErrorNorms error_norms(const Mesh& mesh, const TaylorHoodSpaces& spaces, const Vector& u,
                       const Vector& p, const VectorField& exact_u, const ScalarField& exact_p);

}  // namespace magma
