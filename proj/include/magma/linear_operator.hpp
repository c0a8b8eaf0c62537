#pragma once

#include <algorithm>
#include <memory>
#include <span>
#include <string>

#include "magma/cholesky.hpp"
#include "magma/csr_matrix.hpp"

namespace magma {

/// Square linear map applied out of place.
class LinearOperator {
public:
  virtual ~LinearOperator() = default;
  virtual int size() const = 0;
  virtual void apply(std::span<const double> x, std::span<double> y) const = 0;

  Vector operator()(std::span<const double> x) const {
    Vector y(static_cast<std::size_t>(size()));
    apply(x, y);
    return y;
  }
};

class MatrixOperator final : public LinearOperator {
public:
  explicit MatrixOperator(const CsrMatrix& m) : m_(&m) {}
  int size() const override { return m_->rows(); }
  void apply(std::span<const double> x, std::span<double> y) const override { m_->multiply(x, y); }

private:
  const CsrMatrix* m_;
};

/// Exact inverse action through a sparse Cholesky factorization.
class CholeskyInverse final : public LinearOperator {
public:
  explicit CholeskyInverse(const CsrMatrix& m) : factor_(m) {}
  int size() const override { return factor_.size(); }
  void apply(std::span<const double> x, std::span<double> y) const override { factor_.solve(x, y); }

private:
  SparseCholesky factor_;
};

class IdentityOperator final : public LinearOperator {
public:
  explicit IdentityOperator(int n) : n_(n) {}
  int size() const override { return n_; }
  void apply(std::span<const double> x, std::span<double> y) const override {
    std::copy(x.begin(), x.end(), y.begin());
  }

private:
  int n_;
};

/// [A Bᵀ; B -C] acting on stacked (u, p). Holds references; the matrices
/// must outlive the operator.
class BlockOperator final : public LinearOperator {
public:
  BlockOperator(const CsrMatrix& A, const CsrMatrix& B, const CsrMatrix& C);

  int size() const override { return n_u_ + n_p_; }
  int n_u() const { return n_u_; }
  int n_p() const { return n_p_; }
  void apply(std::span<const double> x, std::span<double> y) const override;

private:
  const CsrMatrix* A_;
  const CsrMatrix* B_;
  const CsrMatrix* C_;
  int n_u_;
  int n_p_;
};

enum class PreconditionerKind { Exact, Multigrid };

std::string to_string(PreconditionerKind kind);

/// Block-diagonal preconditioner diag(P, T) given through the actions of
/// P⁻¹ (velocity block) and T⁻¹ (pressure block).
class BlockDiagonalPreconditioner final : public LinearOperator {
public:
  BlockDiagonalPreconditioner(std::shared_ptr<const LinearOperator> velocity_inverse,
                              std::shared_ptr<const LinearOperator> pressure_inverse,
                              PreconditionerKind kind);

  int size() const override { return velocity_->size() + pressure_->size(); }
  void apply(std::span<const double> x, std::span<double> y) const override;

  PreconditionerKind kind() const { return kind_; }
  const LinearOperator& velocity_inverse() const { return *velocity_; }
  const LinearOperator& pressure_inverse() const { return *pressure_; }

private:
  std::shared_ptr<const LinearOperator> velocity_;
  std::shared_ptr<const LinearOperator> pressure_;
  PreconditionerKind kind_;
};

/// p - (1ᵀQp / 1ᵀQ1) 1: removes the constant mode in the Q inner product.
Vector project_constant_pressure(std::span<const double> p, const CsrMatrix& Q);

/// In-place variant with the precomputed weights w = Q 1.
void project_constant_pressure(std::span<double> p, std::span<const double> q_ones);

}  // namespace magma
