#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "magma/amg.hpp"
#include "magma/assembly.hpp"
#include "magma/linear_operator.hpp"
#include "magma/mesh.hpp"
#include "magma/minres.hpp"

namespace magma {

enum class CaseKind { MmsSquare, WedgeCorner, WedgeTraction };

std::string to_string(CaseKind kind);
/// Accepts "mms", "wedge-corner", "wedge-traction" (and the enum spellings
/// MMS_SQUARE, WEDGE_CORNER, WEDGE_TRACTION). Throws std::invalid_argument.
CaseKind parse_case_kind(std::string_view text);
/// Accepts "lu" / "amg", case-insensitive.
PreconditionerKind parse_preconditioner(std::string_view text);

struct CaseConfig {
  CaseKind kind = CaseKind::MmsSquare;
  int n = 16;
  double alpha = 0.0;
  double k_star = 0.5;  // MMS permeability range
  double k_sup = 1.5;
  PreconditionerKind pc = PreconditionerKind::Exact;
  double tol = 1e-8;
  int max_iters = 5000;
  /// Overrides of the velocity AMG smoother. By default Chebyshev-Jacobi
  /// with two applications, switched to symmetric Gauss-Seidel with four
  /// applications for alpha >= 1000.
  std::optional<int> smoother_apps;
  std::optional<SmootherKind> smoother;
};

/// Throws std::invalid_argument for configurations outside the supported
/// range (alpha in [-1/3, 1000], 0 <= k_star <= k_sup, positive n, tol, iterations).
void validate(const CaseConfig& config);

/// Velocity AMG options used for a given configuration.
AmgOptions velocity_amg_options(const CaseConfig& config);

/// Everything needed to build and precondition one case, before the solve.
struct CaseProblem {
  CaseConfig config;
  std::shared_ptr<const Mesh> mesh;
  TaylorHoodSpaces spaces;
  ScalarField k;
  BlockSystem system;
};

CaseProblem build_problem(const CaseConfig& config);

/// diag(P, T) for the configured preconditioner kind.
std::shared_ptr<BlockDiagonalPreconditioner> build_preconditioner(const CaseProblem& problem);

struct CaseResult {
  CaseConfig config;
  int n_dofs = 0;
  SolverReport report;
  Vector u;
  Vector p;
  /// L2 errors against the manufactured solution; NaN for the wedge cases.
  double vel_err;
  double p_err;
  double setup_seconds = 0.0;
  std::shared_ptr<const Mesh> mesh;
  ScalarField k;
};

/// Build, precondition, solve and postprocess. Non-convergence is reported
/// through `report.converged`.
CaseResult run_case(const CaseConfig& config);

}  // namespace magma
