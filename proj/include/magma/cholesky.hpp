#pragma once

#include <memory>
#include <span>
#include <stdexcept>

#include "magma/csr_matrix.hpp"

namespace magma {

/// Raised when a factorization meets a non-positive pivot.
class NotPositiveDefinite : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Sparse LLᵀ factorization of a symmetric positive definite matrix with a
/// fill-reducing ordering. Immutable after construction; `solve` is const
/// and may be shared.
class SparseCholesky {
public:
  explicit SparseCholesky(const CsrMatrix& matrix);
  ~SparseCholesky();
  SparseCholesky(SparseCholesky&&) noexcept;
  SparseCholesky& operator=(SparseCholesky&&) noexcept;

  int size() const { return n_; }
  Vector solve(std::span<const double> rhs) const;
  void solve(std::span<const double> rhs, std::span<double> x) const;

  /// Name of the backend doing the work ("cholmod" or "eigen-simplicial").
  static const char* backend();

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int n_ = 0;
};

}  // namespace magma
