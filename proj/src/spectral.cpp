#include "magma/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

#include "magma/cholesky.hpp"

namespace magma {

SchurConstants predicted_constants(double alpha, double k_star, double c1, double cP) {
  if (!(alpha >= -1.0 / 3.0 - 1e-12 && alpha <= 1000.0)) {
    throw std::invalid_argument("predicted_constants: alpha outside the analysed range [-1/3, 1000]");
  }
  if (!(k_star >= 0.0)) throw std::invalid_argument("predicted_constants: k_star must be non-negative");
  if (!(c1 > 0.0 && cP > 0.0)) throw std::invalid_argument("predicted_constants: c1 and cP must be positive");
  const double a = std::abs(alpha);
  SchurConstants c{};
  c.c_upper = alpha < 0.0 ? 1.0 / (1.0 - a) : 1.0;
  c.c_lower = std::min((c1 * c1 + cP * k_star * (1.0 + a)) / ((1.0 + a) * (1.0 + cP * k_star)), 1.0);
  return c;
}

EigenvalueIntervals eigenvalue_intervals(const SchurConstants& c, const PreconditionerEquivalence& d) {
  EigenvalueIntervals iv{};
  iv.neg_lo = -c.c_upper * d.qt_upper;
  iv.neg_hi = 0.5 * (d.ap_lower - std::sqrt(d.ap_lower * d.ap_lower + 4.0 * c.c_lower * d.qt_lower * d.ap_lower));
  iv.pos_lo = d.ap_lower;
  iv.pos_hi = d.ap_upper + c.c_upper * d.qt_upper;
  return iv;
}

namespace {

// Above this many unknowns the Auto method switches to Lanczos.
constexpr int kDenseLimit = 1500;

Eigen::MatrixXd to_dense(const CsrMatrix& m) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i) {
    for (int k = m.row_ptr()[i]; k < m.row_ptr()[i + 1]; ++k) d(i, m.col_idx()[k]) += m.values()[k];
  }
  return d;
}

Eigen::MatrixXd dense_block(const CsrMatrix& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  std::vector<int> col_pos(m.cols(), -1);
  for (int j = 0; j < static_cast<int>(cols.size()); ++j) col_pos[cols[j]] = j;
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()),
                                            static_cast<Eigen::Index>(cols.size()));
  for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
    const int r = rows[i];
    for (int k = m.row_ptr()[r]; k < m.row_ptr()[r + 1]; ++k) {
      const int j = col_pos[m.col_idx()[k]];
      if (j >= 0) d(i, j) += m.values()[k];
    }
  }
  return d;
}

std::vector<int> iota(int n) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i;
  return v;
}

// Orthonormal basis (n x (n-1)) of the Euclidean complement of w.
Eigen::MatrixXd complement_basis(const Eigen::VectorXd& w) {
  const Eigen::Index n = w.size();
  Eigen::VectorXd v = w / w.norm();
  v(0) += v(0) >= 0.0 ? 1.0 : -1.0;
  Eigen::MatrixXd H = Eigen::MatrixXd::Identity(n, n) - (2.0 / v.squaredNorm()) * v * v.transpose();
  return H.rightCols(n - 1);
}

Eigen::VectorXd generalized_eigenvalues(const Eigen::MatrixXd& K, const Eigen::MatrixXd& M) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(K, M, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw EigenFailure("generalized eigensolve failed");
  return es.eigenvalues();
}

// Eigenvalues of (K, M) on the M-orthogonal complement of `deflate`
// (Euclidean complement of M deflate).
Eigen::VectorXd deflated_eigenvalues(const Eigen::MatrixXd& K, const Eigen::MatrixXd& M, const Vector* deflate) {
  if (!deflate) return generalized_eigenvalues(K, M);
  const Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(deflate->data(), static_cast<Eigen::Index>(deflate->size()));
  const Eigen::MatrixXd Z = complement_basis(M * d);
  return generalized_eigenvalues(Z.transpose() * K * Z, Z.transpose() * M * Z);
}

// Fix every dof on the boundary: rows and columns of `m` become identity.
CsrMatrix eliminate(const CsrMatrix& m, const std::vector<char>& fixed) {
  std::vector<Triplet> t;
  t.reserve(m.nnz());
  for (int i = 0; i < m.rows(); ++i) {
    if (fixed[i]) {
      t.push_back({i, i, 1.0});
      continue;
    }
    for (int k = m.row_ptr()[i]; k < m.row_ptr()[i + 1]; ++k) {
      if (!fixed[m.col_idx()[k]]) t.push_back({i, m.col_idx()[k], m.values()[k]});
    }
  }
  return CsrMatrix::from_triplets(m.rows(), m.cols(), std::move(t));
}

CsrMatrix drop_columns(const CsrMatrix& m, const std::vector<char>& fixed) {
  std::vector<Triplet> t;
  t.reserve(m.nnz());
  for (int i = 0; i < m.rows(); ++i) {
    for (int k = m.row_ptr()[i]; k < m.row_ptr()[i + 1]; ++k) {
      if (!fixed[m.col_idx()[k]]) t.push_back({i, m.col_idx()[k], m.values()[k]});
    }
  }
  return CsrMatrix::from_triplets(m.rows(), m.cols(), std::move(t));
}

// x -> B V⁻¹ Bᵀ x (+ C x)
class SchurOperator final : public LinearOperator {
public:
  SchurOperator(const CsrMatrix& V, const CsrMatrix& B, const CsrMatrix* C)
      : factor_(V), B_(&B), C_(C), tmp_(V.rows()), sol_(V.rows()) {}
  int size() const override { return B_->rows(); }
  void apply(std::span<const double> x, std::span<double> y) const override {
    B_->multiply_transpose(x, tmp_);
    factor_.solve(tmp_, sol_);
    B_->multiply(sol_, y);
    if (C_) {
      Vector cx(y.size());
      C_->multiply(x, cx);
      for (std::size_t i = 0; i < y.size(); ++i) y[i] += cx[i];
    }
  }
  // Dense B V⁻¹ Bᵀ (+ C).
  Eigen::MatrixXd dense() const {
    const int np = B_->rows();
    Eigen::MatrixXd S(np, np);
    Vector e(np, 0.0), col(np);
    for (int j = 0; j < np; ++j) {
      e[j] = 1.0;
      apply(e, col);
      e[j] = 0.0;
      for (int i = 0; i < np; ++i) S(i, j) = col[i];
    }
    return 0.5 * (S + S.transpose());
  }

private:
  SparseCholesky factor_;
  const CsrMatrix* B_;
  const CsrMatrix* C_;
  mutable Vector tmp_;
  mutable Vector sol_;
};

bool use_dense(EigenMethod method, int n) {
  return method == EigenMethod::Dense || (method == EigenMethod::Auto && n <= kDenseLimit);
}

Extremes pencil_extremes(const SchurOperator& K, const CsrMatrix& M, bool deflate_constant, EigenMethod method) {
  const int n = M.rows();
  const Vector ones(n, 1.0);
  if (use_dense(method, n)) {
    const Eigen::VectorXd ev = deflated_eigenvalues(K.dense(), to_dense(M), deflate_constant ? &ones : nullptr);
    return {ev.minCoeff(), ev.maxCoeff()};
  }
  const CholeskyInverse minv(M);
  return lanczos_extremes(K, M, minv, deflate_constant ? ones : Vector{});
}

}  // namespace

Extremes lanczos_extremes(const LinearOperator& apply_k, const CsrMatrix& M, const LinearOperator& solve_m,
                          const Vector& deflate, int max_steps, double tol) {
  const int n = M.rows();
  std::vector<Vector> basis;   // M-orthonormal Lanczos vectors
  std::vector<Vector> mbasis;  // M times each basis vector
  Vector md;
  double dmd = 0.0;
  if (!deflate.empty()) {
    md = M * deflate;
    dmd = dot(deflate, md);
  }
  auto project = [&](Vector& v) {
    if (deflate.empty()) return;
    axpy(-dot(v, md) / dmd, deflate, v);
  };

  std::mt19937 gen(2024u);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector q(n);
  for (double& v : q) v = dist(gen);
  project(q);

  std::vector<double> alphas, betas;
  Vector mq(n), kq(n), u(n);
  Extremes last{std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  const int steps = std::min(max_steps, n - (deflate.empty() ? 0 : 1));
  for (int j = 0; j < steps; ++j) {
    M.multiply(q, mq);
    const double qn = std::sqrt(dot(q, mq));
    if (!(qn > 0.0) || !std::isfinite(qn)) throw EigenFailure("lanczos: degenerate starting vector");
    for (int i = 0; i < n; ++i) {
      q[i] /= qn;
      mq[i] /= qn;
    }
    basis.push_back(q);
    mbasis.push_back(mq);
    apply_k.apply(q, kq);
    solve_m.apply(kq, u);
    alphas.push_back(dot(q, kq));
    // Rounding reintroduces the deflated direction, and Lanczos amplifies it
    // quickly when it sits at the end of the spectrum, so project every pass.
    for (int pass = 0; pass < 2; ++pass) {
      project(u);
      for (std::size_t i = 0; i < basis.size(); ++i) axpy(-dot(u, mbasis[i]), basis[i], u);
    }
    project(u);
    M.multiply(u, mq);
    const double beta = std::sqrt(std::max(dot(u, mq), 0.0));

    const int m = static_cast<int>(alphas.size());
    const bool done = beta <= 1e-12 * std::abs(alphas.back()) || j + 1 == steps;
    if (m % 5 == 0 || done) {
      Eigen::MatrixXd Tm = Eigen::MatrixXd::Zero(m, m);
      for (int i = 0; i < m; ++i) {
        Tm(i, i) = alphas[i];
        if (i + 1 < m) Tm(i, i + 1) = Tm(i + 1, i) = betas[i];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Tm, Eigen::EigenvaluesOnly);
      const Extremes now{es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
      const double scale = std::max(std::abs(now.min), std::abs(now.max));
      const bool settled = std::abs(now.min - last.min) <= tol * scale && std::abs(now.max - last.max) <= tol * scale;
      last = now;
      if (settled || done) return last;
    }
    betas.push_back(beta);
    q = u;
  }
  throw EigenFailure("lanczos: no convergence");
}

double estimate_infsup(const Mesh& mesh, const TaylorHoodSpaces& spaces, EigenMethod method) {
  std::vector<char> fixed(spaces.velocity.n_dofs(), 0);
  for (int d : spaces.velocity.boundary_dofs(mesh, BoundaryTag::All)) fixed[d] = 1;
  const CsrMatrix G = eliminate(assemble_velocity_form(mesh, spaces.velocity, VelocityForm::Gradient), fixed);
  const CsrMatrix B = drop_columns(assemble_B(mesh, spaces.velocity, spaces.pressure), fixed);
  const CsrMatrix Q = assemble_Q(mesh, spaces.pressure);
  const SchurOperator S(G, B, nullptr);
  const Extremes e = pencil_extremes(S, Q, true, method);
  if (!(e.min > 0.0)) throw EigenFailure("estimate_infsup: non-positive eigenvalue");
  return std::sqrt(e.min);
}

double estimate_poincare(const Mesh& mesh, const TaylorHoodSpaces& spaces, EigenMethod method) {
  const CsrMatrix C = assemble_Ck(mesh, spaces.pressure, constant_field(1.0));
  const CsrMatrix Q = assemble_Q(mesh, spaces.pressure);
  const int n = Q.rows();
  const Vector ones(n, 1.0);
  if (use_dense(method, n)) {
    const Eigen::VectorXd ev = deflated_eigenvalues(to_dense(C), to_dense(Q), &ones);
    return ev.minCoeff();
  }
  // Shift-invert: Q q = μ (C + Q) q, μ = 1 / (1 + λ); the largest μ gives the smallest λ.
  const CsrMatrix CQ = C.add(Q);
  const MatrixOperator qop(Q);
  const CholeskyInverse inv(CQ);
  const Extremes e = lanczos_extremes(qop, CQ, inv, ones);
  return 1.0 / e.max - 1.0;
}

Extremes schur_rayleigh_extremes(const BlockSystem& sys, EigenMethod method) {
  const SchurOperator S(sys.A, sys.B, &sys.Ck);
  return pencil_extremes(S, sys.Q.add(sys.Ck), sys.has_pressure_nullspace, method);
}

double coupling_extreme(const BlockSystem& sys, EigenMethod method) {
  const SchurOperator S(sys.A, sys.B, nullptr);
  return pencil_extremes(S, sys.Q.add(sys.Ck), sys.has_pressure_nullspace, method).max;
}

SplitSpectrum preconditioned_eigenvalues(const BlockSystem& sys, const CsrMatrix& P, const CsrMatrix& T) {
  const std::vector<int> free = sys.free_velocity_dofs();
  const std::vector<int> pres = iota(sys.n_p());
  const Eigen::Index nf = static_cast<Eigen::Index>(free.size());
  const Eigen::Index np = sys.n_p();

  Eigen::MatrixXd Bf = dense_block(sys.B, pres, free);
  Eigen::MatrixXd C = to_dense(sys.Ck);
  Eigen::MatrixXd Td = to_dense(T);
  Eigen::Index npr = np;
  if (sys.has_pressure_nullspace) {
    const Eigen::MatrixXd Z = complement_basis(Td * Eigen::VectorXd::Ones(np));
    Bf = Z.transpose() * Bf;
    C = Z.transpose() * C * Z;
    Td = Z.transpose() * Td * Z;
    npr = np - 1;
  }
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(nf + npr, nf + npr);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(nf + npr, nf + npr);
  K.topLeftCorner(nf, nf) = dense_block(sys.A, free, free);
  K.topRightCorner(nf, npr) = Bf.transpose();
  K.bottomLeftCorner(npr, nf) = Bf;
  K.bottomRightCorner(npr, npr) = -C;
  M.topLeftCorner(nf, nf) = dense_block(P, free, free);
  M.bottomRightCorner(npr, npr) = Td;
  K = 0.5 * (K + K.transpose()).eval();
  M = 0.5 * (M + M.transpose()).eval();

  const Eigen::VectorXd ev = generalized_eigenvalues(K, M);
  SplitSpectrum out;
  for (Eigen::Index i = 0; i < ev.size(); ++i) (ev(i) < 0.0 ? out.negative : out.positive).push_back(ev(i));
  return out;
}

BoundsReport compute_bounds(const Mesh& mesh, const TaylorHoodSpaces& spaces, const BlockSystem& sys,
                            double k_star, double tol) {
  BoundsReport r;
  r.alpha = sys.alpha;
  r.k_star = k_star;
  r.c1_est = estimate_infsup(mesh, spaces);
  r.cP_est = estimate_poincare(mesh, spaces);
  r.predicted = predicted_constants(sys.alpha, k_star, r.c1_est, r.cP_est);
  r.rayleigh = schur_rayleigh_extremes(sys);
  r.coupling_max = coupling_extreme(sys);
  const SplitSpectrum spec = preconditioned_eigenvalues(sys, sys.A, sys.Q.add(sys.Ck));
  const double nan = std::numeric_limits<double>::quiet_NaN();
  r.eig_neg = spec.negative.empty() ? Extremes{nan, nan} : Extremes{spec.negative.front(), spec.negative.back()};
  r.eig_pos = spec.positive.empty() ? Extremes{nan, nan} : Extremes{spec.positive.front(), spec.positive.back()};
  r.intervals = eigenvalue_intervals(r.predicted);
  for (double l : spec.negative) r.eig_violations += !r.intervals.contains(l, tol);
  for (double l : spec.positive) r.eig_violations += !r.intervals.contains(l, tol);
  r.schur_contained = r.rayleigh.min >= r.predicted.c_lower - tol && r.rayleigh.max <= r.predicted.c_upper + tol;
  r.coupling_contained = r.coupling_max <= r.predicted.c_upper + tol;
  r.eig_contained = r.eig_violations == 0;
  return r;
}

std::string BoundsReport::csv_header() {
  return "alpha,k_star,c1,cP,c_q,c^q,rayleigh_min,rayleigh_max,coupling_max,eig_neg_min,eig_neg_max,"
         "eig_pos_min,eig_pos_max,schur_contained,coupling_contained,eig_contained";
}

std::string BoundsReport::csv_row() const {
  std::ostringstream os;
  os << std::setprecision(10) << alpha << ',' << k_star << ',' << c1_est << ',' << cP_est << ','
     << predicted.c_lower << ',' << predicted.c_upper << ',' << rayleigh.min << ',' << rayleigh.max << ','
     << coupling_max << ',' << eig_neg.min << ',' << eig_neg.max << ',' << eig_pos.min << ',' << eig_pos.max
     << ',' << schur_contained << ',' << coupling_contained << ',' << eig_contained;
  return os.str();
}

std::string BoundsReport::text() const {
  std::ostringstream os;
  os << std::setprecision(6);
  os << "alpha = " << alpha << ", k_* = " << k_star << "\n"
     << "  c1 = " << c1_est << ", cP = " << cP_est << "\n"
     << "  predicted c_q = " << predicted.c_lower << ", c^q = " << predicted.c_upper << "\n"
     << "  Schur Rayleigh range [" << rayleigh.min << ", " << rayleigh.max << "]"
     << (schur_contained ? " inside" : " OUTSIDE") << " [c_q, c^q]\n"
     << "  max B^T(Q+C)^-1 B vs A = " << coupling_max << (coupling_contained ? " <= c^q" : " EXCEEDS c^q") << "\n"
     << "  negative eigenvalues [" << eig_neg.min << ", " << eig_neg.max << "] vs bound [" << intervals.neg_lo
     << ", " << intervals.neg_hi << "]\n"
     << "  positive eigenvalues [" << eig_pos.min << ", " << eig_pos.max << "] vs bound [" << intervals.pos_lo
     << ", " << intervals.pos_hi << "]\n"
     << "  eigenvalue violations: " << eig_violations << "\n";
  return os.str();
}

}  // namespace magma
