#pragma once

#include <optional>
#include <span>
#include <stdexcept>

#include "magma/linear_operator.hpp"

namespace magma {

/// NaN or an indefinite preconditioner inside the MINRES recurrence.
class SolverBreakdown : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Constant-pressure nullspace of a saddle-point operator: pressure dofs
/// start at `offset`, and `q_ones` = Q 1 defines the projection.
struct PressureNullspace {
  int offset = 0;
  Vector q_ones;
};

struct MinresOptions {
  double tol = 1e-8;
  int max_iters = 5000;
  /// When set, the pressure block of every iterate is projected
  /// Q-orthogonal to the constant vector.
  std::optional<PressureNullspace> nullspace;
};

struct SolverReport {
  int iterations = 0;
  bool converged = false;
  /// ‖b - K x_k‖₂ / ‖b‖₂ for k = 0..iterations (x₀ = 0, so entry 0 is 1).
  Vector residual_history;
  /// Preconditioned residual norm from the recurrence, relative to its
  /// initial value.
  Vector preconditioned_history;
  double seconds = 0.0;
  Vector solution;

  double final_residual() const { return residual_history.empty() ? 0.0 : residual_history.back(); }
};

/// Preconditioned MINRES from a zero initial guess. Stops when the true
/// relative residual, recomputed from the operator every iteration, drops
/// to `tol`. Running out of iterations is reported, not thrown.
SolverReport minres(const LinearOperator& op, const LinearOperator& preconditioner,
                    std::span<const double> rhs, const MinresOptions& options = {});

}  // namespace magma
