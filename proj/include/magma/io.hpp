#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "magma/assembly.hpp"
#include "magma/csr_matrix.hpp"
#include "magma/mesh.hpp"
#include "magma/run_case.hpp"

namespace magma {

/// Legacy ASCII VTK unstructured grid with the P1 triangulation. Point data:
/// velocity `u` (vertex values of the P2 field), pressure `p` and
/// permeability `k`; cell data: fluid velocity `u_f`. Vectors are written
/// as (x, z, 0).
void write_vtk(std::ostream& out, const Mesh& mesh, const TaylorHoodSpaces& spaces, const Vector& u,
               const Vector& p, const ScalarField& k, const std::vector<Vec2>& fluid);
void write_vtk(const std::string& path, const Mesh& mesh, const TaylorHoodSpaces& spaces, const Vector& u,
               const Vector& p, const ScalarField& k, const std::vector<Vec2>& fluid);

/// Matrix Market coordinate real general format.
void write_matrix_market(std::ostream& out, const CsrMatrix& m);

/// iteration,true_residual,preconditioned_residual
void write_history_csv(std::ostream& out, const SolverReport& report);

/// case,n,N_dofs,alpha,k_star,k_sup,pc,iterations,converged,vel_err,p_err,seconds
std::string results_csv_header();
std::string results_csv_row(const CaseResult& result);

}  // namespace magma
