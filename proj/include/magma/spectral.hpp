#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "magma/assembly.hpp"
#include "magma/linear_operator.hpp"
#include "magma/mesh.hpp"

namespace magma {

/// Lower and upper Schur-complement equivalence constants.
struct SchurConstants {
  double c_lower;  // c_q
  double c_upper;  // c^q
};

/// c^q = 1 / (1 - |alpha|) for -1/3 <= alpha < 0, 1 otherwise;
/// c_q = min((c1² + cP k*(1 + |alpha|)) / ((1 + |alpha|)(1 + cP k*)), 1).
/// Throws std::invalid_argument for alpha outside [-1/3, 1000], negative
/// k_star or non-positive c1, cP.
SchurConstants predicted_constants(double alpha, double k_star, double c1, double cP);

/// Equivalence constants of P against A and T against Q + C_k.
struct PreconditionerEquivalence {
  double ap_lower = 1.0;
  double ap_upper = 1.0;
  double qt_lower = 1.0;
  double qt_upper = 1.0;
};

struct EigenvalueIntervals {
  double neg_lo;
  double neg_hi;
  double pos_lo;
  double pos_hi;

  bool contains(double lambda, double tol) const {
    if (lambda < 0.0) return lambda >= neg_lo - tol && lambda <= neg_hi + tol;
    return lambda >= pos_lo - tol && lambda <= pos_hi + tol;
  }
};

/// Negative eigenvalues in [-c^q δ^QT, (δ_AP - sqrt(δ_AP² + 4 c_q δ_QT δ_AP)) / 2],
/// positive ones in [δ_AP, δ^AP + c^q δ^QT].
EigenvalueIntervals eigenvalue_intervals(const SchurConstants& c, const PreconditionerEquivalence& d = {});

enum class EigenMethod { Auto, Dense, Lanczos };

/// Thrown when an eigensolve fails or the Lanczos iteration does not settle.
class EigenFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Discrete inf-sup constant: square root of the smallest eigenvalue of
/// B G⁻¹ Bᵀ q = λ Q q on Q-mean-free pressures, with G the vector Laplacian
/// and velocity fixed on the whole boundary.
double estimate_infsup(const Mesh& mesh, const TaylorHoodSpaces& spaces, EigenMethod method = EigenMethod::Auto);

/// Smallest nonzero eigenvalue of the P1 Laplacian against the mass matrix.
double estimate_poincare(const Mesh& mesh, const TaylorHoodSpaces& spaces, EigenMethod method = EigenMethod::Auto);

struct Extremes {
  double min;
  double max;
};

/// Extreme eigenvalues of S q = λ (Q + C_k) q with S = B A⁻¹ Bᵀ + C_k,
/// restricted to Q-mean-free pressures when the system has the constant
/// pressure nullspace.
Extremes schur_rayleigh_extremes(const BlockSystem& system, EigenMethod method = EigenMethod::Auto);

/// Largest eigenvalue of Bᵀ (Q + C_k)⁻¹ B v = λ A v. Computed through the
/// pressure-sized pencil (B A⁻¹ Bᵀ, Q + C_k), which has the same nonzero
/// spectrum.
double coupling_extreme(const BlockSystem& system, EigenMethod method = EigenMethod::Auto);

struct SplitSpectrum {
  std::vector<double> negative;  // ascending
  std::vector<double> positive;  // ascending
};

/// All eigenvalues of [A Bᵀ; B -C_k] x = λ diag(P, T) x on the free velocity
/// dofs, with the constant pressure deflated when present. Dense; meant for
/// small meshes.
SplitSpectrum preconditioned_eigenvalues(const BlockSystem& system, const CsrMatrix& P, const CsrMatrix& T);

/// Extreme eigenvalues of the pencil (K, M), K symmetric, M SPD, restricted
/// to the M-orthogonal complement of `deflate` (empty for none), by Lanczos
/// with full reorthogonalisation in the M inner product. `apply_k` gives K x
/// and `solve_m` gives M⁻¹ y.
Extremes lanczos_extremes(const LinearOperator& apply_k, const CsrMatrix& M, const LinearOperator& solve_m,
                          const Vector& deflate, int max_steps = 300, double tol = 1e-10);

struct BoundsReport {
  double alpha = 0.0;
  double k_star = 0.0;
  double c1_est = 0.0;
  double cP_est = 0.0;
  SchurConstants predicted{};
  Extremes rayleigh{};
  double coupling_max = 0.0;
  Extremes eig_neg{};
  Extremes eig_pos{};
  EigenvalueIntervals intervals{};
  int eig_violations = 0;
  bool schur_contained = false;
  bool coupling_contained = false;
  bool eig_contained = false;

  static std::string csv_header();
  std::string csv_row() const;
  std::string text() const;
};

/// Measures c1 and cP on `mesh`, predicts the constants for (alpha, k_star)
/// and checks Schur, coupling and block eigenvalue containment with
/// P = A, T = Q + C_k, at absolute tolerance `tol`.
BoundsReport compute_bounds(const Mesh& mesh, const TaylorHoodSpaces& spaces, const BlockSystem& system,
                            double k_star, double tol = 1e-8);

}  // namespace magma
