#include "magma/cholesky.hpp"

#include <Eigen/SparseCore>
#include <string>

#ifdef MAGMA_HAVE_CHOLMOD
#include <Eigen/CholmodSupport>
#else
#include <Eigen/OrderingMethods>
#include <Eigen/SparseCholesky>
#endif

namespace magma {

namespace {

#ifdef MAGMA_HAVE_CHOLMOD
using Factor = Eigen::CholmodSupernodalLLT<Eigen::SparseMatrix<double>, Eigen::Lower>;
#else
using Factor = Eigen::SimplicialLLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::AMDOrdering<int>>;
#endif

Eigen::SparseMatrix<double> lower_triangle(const CsrMatrix& m) {
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(m.nnz() / 2 + m.rows());
  for (int i = 0; i < m.rows(); ++i) {
    for (int k = m.row_ptr()[i]; k < m.row_ptr()[i + 1]; ++k) {
      const int j = m.col_idx()[k];
      if (j <= i) entries.emplace_back(i, j, m.values()[k]);
    }
  }
  Eigen::SparseMatrix<double> lower(m.rows(), m.cols());
  lower.setFromTriplets(entries.begin(), entries.end());
  return lower;
}

}  // namespace

struct SparseCholesky::Impl {
  Factor factor;
};

SparseCholesky::SparseCholesky(const CsrMatrix& matrix) : impl_(std::make_unique<Impl>()), n_(matrix.rows()) {
  if (matrix.rows() != matrix.cols()) throw std::invalid_argument("SparseCholesky: matrix not square");
  const auto lower = lower_triangle(matrix);
#ifdef MAGMA_HAVE_CHOLMOD
  impl_->factor.cholmod().print = 0;
#endif
  impl_->factor.compute(lower);
  if (impl_->factor.info() != Eigen::Success) {
    throw NotPositiveDefinite("SparseCholesky: matrix is not symmetric positive definite (n = " +
                              std::to_string(n_) + ")");
  }
}

SparseCholesky::~SparseCholesky() = default;
SparseCholesky::SparseCholesky(SparseCholesky&&) noexcept = default;
SparseCholesky& SparseCholesky::operator=(SparseCholesky&&) noexcept = default;

void SparseCholesky::solve(std::span<const double> rhs, std::span<double> x) const {
  if (rhs.size() != static_cast<std::size_t>(n_) || x.size() != rhs.size()) {
    throw std::invalid_argument("SparseCholesky::solve: dimension mismatch");
  }
  Eigen::Map<const Eigen::VectorXd> b(rhs.data(), n_);
  Eigen::Map<Eigen::VectorXd> out(x.data(), n_);
  out = impl_->factor.solve(b);
}

Vector SparseCholesky::solve(std::span<const double> rhs) const {
  Vector x(rhs.size());
  solve(rhs, x);
  return x;
}

const char* SparseCholesky::backend() {
#ifdef MAGMA_HAVE_CHOLMOD
  return "cholmod";
#else
  return "eigen-simplicial";
#endif
}

}  // namespace magma
