#include "magma/linear_operator.hpp"

#include <numeric>
#include <stdexcept>

namespace magma {

BlockOperator::BlockOperator(const CsrMatrix& A, const CsrMatrix& B, const CsrMatrix& C)
    : A_(&A), B_(&B), C_(&C), n_u_(A.rows()), n_p_(C.rows()) {
  if (A.cols() != n_u_ || B.rows() != n_p_ || B.cols() != n_u_ || C.cols() != n_p_) {
    throw std::invalid_argument("BlockOperator: inconsistent block shapes");
  }
}

void BlockOperator::apply(std::span<const double> x, std::span<double> y) const {
  const auto u = x.first(n_u_);
  const auto p = x.subspan(n_u_, n_p_);
  auto yu = y.first(n_u_);
  auto yp = y.subspan(n_u_, n_p_);

  A_->multiply(u, yu);
  Vector tmp_u(n_u_);
  B_->multiply_transpose(p, tmp_u);
  for (int i = 0; i < n_u_; ++i) yu[i] += tmp_u[i];

  B_->multiply(u, yp);
  Vector tmp_p(n_p_);
  C_->multiply(p, tmp_p);
  for (int i = 0; i < n_p_; ++i) yp[i] -= tmp_p[i];
}

std::string to_string(PreconditionerKind kind) {
  return kind == PreconditionerKind::Exact ? "LU" : "AMG";
}

BlockDiagonalPreconditioner::BlockDiagonalPreconditioner(
    std::shared_ptr<const LinearOperator> velocity_inverse,
    std::shared_ptr<const LinearOperator> pressure_inverse, PreconditionerKind kind)
    : velocity_(std::move(velocity_inverse)), pressure_(std::move(pressure_inverse)), kind_(kind) {
  if (!velocity_ || !pressure_) throw std::invalid_argument("BlockDiagonalPreconditioner: missing block");
}

void BlockDiagonalPreconditioner::apply(std::span<const double> x, std::span<double> y) const {
  const int nu = velocity_->size();
  const int np = pressure_->size();
  velocity_->apply(x.first(nu), y.first(nu));
  pressure_->apply(x.subspan(nu, np), y.subspan(nu, np));
}

void project_constant_pressure(std::span<double> p, std::span<const double> q_ones) {
  const double total = std::accumulate(q_ones.begin(), q_ones.end(), 0.0);
  const double shift = dot(q_ones, p) / total;
  for (double& v : p) v -= shift;
}

Vector project_constant_pressure(std::span<const double> p, const CsrMatrix& Q) {
  const Vector ones(p.size(), 1.0);
  const Vector q_ones = Q * ones;
  Vector out(p.begin(), p.end());
  project_constant_pressure(out, q_ones);
  return out;
}

}  // namespace magma
