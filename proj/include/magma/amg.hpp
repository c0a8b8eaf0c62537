#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "magma/csr_matrix.hpp"
#include "magma/linear_operator.hpp"
#include "magma/mesh.hpp"

namespace magma {

enum class SmootherKind { ChebyshevJacobi, SymmetricGaussSeidel };

struct SmootherConfig {
  SmootherKind kind = SmootherKind::ChebyshevJacobi;
  /// Smoother applications before and after the coarse correction.
  int applications = 2;
  int chebyshev_degree = 2;
  /// Power iterations used to estimate λmax(D⁻¹A).
  int power_iterations = 10;
  /// The estimate is inflated by this factor before use.
  double eig_safety = 1.1;
  /// Chebyshev interval is [λmax / eig_ratio, λmax].
  double eig_ratio = 30.0;
};

struct AmgOptions {
  /// Dofs per node on the finest level (2 for interleaved 2D velocity).
  int block_size = 1;
  double strength_threshold = 0.08;
  int max_coarse = 200;
  int max_levels = 25;
  /// Prolongator smoothing weight is damping / λmax(D⁻¹A).
  double prolongator_damping = 4.0 / 3.0;
  SmootherConfig smoother;
};

/// Smoothed-aggregation multigrid hierarchy. `apply` performs one V-cycle
/// from a zero initial guess; with the symmetric smoothers provided the
/// resulting operator is symmetric positive definite.
class AmgHierarchy final : public LinearOperator {
public:
  /// `near_nullspace` holds the vectors the prolongators must reproduce
  /// (rigid body modes for elasticity-like blocks, the constant otherwise).
  AmgHierarchy(const CsrMatrix& matrix, const std::vector<Vector>& near_nullspace,
               const AmgOptions& options = {});
  ~AmgHierarchy() override;

  int size() const override;
  void apply(std::span<const double> b, std::span<double> x) const override;
  Vector vcycle(std::span<const double> b) const { return (*this)(b); }

  int num_levels() const;
  const CsrMatrix& level_matrix(int level) const;
  /// Prolongator from level + 1 to level.
  const CsrMatrix& prolongator(int level) const;
  double operator_complexity() const;
  std::string summary() const;

private:
  struct Level;
  struct Coarse;
  void smooth(const Level& level, std::span<const double> b, std::span<double> x) const;
  void cycle(std::size_t level, std::span<const double> b, std::span<double> x) const;

  std::vector<Level> levels_;
  std::unique_ptr<Coarse> coarse_;
  AmgOptions options_;
};

/// Translations (1,0), (0,1) and rotation (-z, x) on interleaved 2D nodes.
std::vector<Vector> rigid_body_modes(std::span<const Point> nodes);

/// Energy-norm contraction of the error propagator I - V M, estimated by
/// power iteration: returns max over the last sweep of ‖e_{k+1}‖_M / ‖e_k‖_M.
double energy_contraction(const LinearOperator& vcycle, const CsrMatrix& matrix, int iterations = 30,
                          unsigned seed = 7);

}  // namespace magma
