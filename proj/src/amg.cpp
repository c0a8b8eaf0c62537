#include "magma/amg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace magma {

struct AmgHierarchy::Level {
  CsrMatrix A;
  CsrMatrix P;  // to the next coarser level (empty on the coarsest)
  CsrMatrix R;  // Pᵀ
  Vector inv_diag;
  double lambda_max = 0.0;  // after safety inflation
  int block_size = 1;
};

struct AmgHierarchy::Coarse {
  Eigen::LLT<Eigen::MatrixXd> factor;
};

namespace {

Vector random_vector(int n, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector v(n);
  for (double& x : v) x = dist(gen);
  return v;
}

double estimate_lambda_max(const CsrMatrix& A, const Vector& inv_diag, int iterations) {
  const int n = A.rows();
  Vector x = random_vector(n, 12345u);
  Vector y(n);
  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    const double nx = norm2(x);
    if (nx == 0.0) break;
    for (double& v : x) v /= nx;
    A.multiply(x, y);
    for (int i = 0; i < n; ++i) y[i] *= inv_diag[i];
    lambda = norm2(y);
    x.swap(y);
  }
  return lambda;
}

// Block-norm node strength graph: J is a strong neighbour of I when
// ‖A_IJ‖_F >= θ sqrt(‖A_II‖_F ‖A_JJ‖_F).
std::vector<std::vector<std::pair<int, double>>> strength_graph(const CsrMatrix& A, int bs,
                                                                double theta) {
  const int nodes = A.rows() / bs;
  std::vector<std::vector<std::pair<int, double>>> block_rows(nodes);
  std::vector<double> acc(nodes, 0.0);
  std::vector<int> marker(nodes, -1);
  std::vector<int> touched;
  std::vector<double> diag(nodes, 0.0);
  for (int I = 0; I < nodes; ++I) {
    touched.clear();
    for (int r = I * bs; r < (I + 1) * bs; ++r) {
      for (int k = A.row_ptr()[r]; k < A.row_ptr()[r + 1]; ++k) {
        const int J = A.col_idx()[k] / bs;
        if (marker[J] != I) {
          marker[J] = I;
          acc[J] = 0.0;
          touched.push_back(J);
        }
        acc[J] += A.values()[k] * A.values()[k];
      }
    }
    std::sort(touched.begin(), touched.end());
    for (int J : touched) {
      const double s = std::sqrt(acc[J]);
      if (J == I) diag[I] = s;
      else if (s > 0.0) block_rows[I].emplace_back(J, s);
    }
  }
  std::vector<std::vector<std::pair<int, double>>> strong(nodes);
  for (int I = 0; I < nodes; ++I) {
    for (const auto& [J, s] : block_rows[I]) {
      if (s >= theta * std::sqrt(diag[I] * diag[J])) strong[I].emplace_back(J, s);
    }
  }
  return strong;
}

// Three-phase greedy aggregation. Nodes without strong neighbours stay
// unaggregated (-1); their rows of the prolongator are zero.
std::vector<int> aggregate(const std::vector<std::vector<std::pair<int, double>>>& strong,
                           int& num_aggregates) {
  const int nodes = static_cast<int>(strong.size());
  std::vector<int> agg(nodes, -1);
  num_aggregates = 0;
  for (int i = 0; i < nodes; ++i) {
    if (agg[i] != -1 || strong[i].empty()) continue;
    bool free = true;
    for (const auto& [j, s] : strong[i]) free &= agg[j] == -1;
    if (!free) continue;
    agg[i] = num_aggregates;
    for (const auto& [j, s] : strong[i]) agg[j] = num_aggregates;
    ++num_aggregates;
  }
  const std::vector<int> phase1 = agg;
  for (int i = 0; i < nodes; ++i) {
    if (agg[i] != -1 || strong[i].empty()) continue;
    double best = -1.0;
    for (const auto& [j, s] : strong[i]) {
      if (phase1[j] != -1 && s > best) {
        best = s;
        agg[i] = phase1[j];
      }
    }
  }
  for (int i = 0; i < nodes; ++i) {
    if (agg[i] != -1 || strong[i].empty()) continue;
    agg[i] = num_aggregates;
    for (const auto& [j, s] : strong[i]) {
      if (agg[j] == -1) agg[j] = num_aggregates;
    }
    ++num_aggregates;
  }
  return agg;
}

struct Tentative {
  CsrMatrix P;
  std::vector<Vector> coarse_nullspace;
};

Tentative tentative_prolongator(int n, int bs, const std::vector<int>& agg, int num_aggregates,
                                const std::vector<Vector>& nullspace) {
  const int m = static_cast<int>(nullspace.size());
  std::vector<std::vector<int>> members(num_aggregates);
  for (int i = 0; i < static_cast<int>(agg.size()); ++i) {
    if (agg[i] >= 0) members[agg[i]].push_back(i);
  }
  std::vector<Triplet> triplets;
  std::vector<Vector> coarse(m, Vector(static_cast<std::size_t>(num_aggregates) * m, 0.0));
  for (int a = 0; a < num_aggregates; ++a) {
    const int rows = static_cast<int>(members[a].size()) * bs;
    Eigen::MatrixXd local(rows, m);
    for (int r = 0; r < rows; ++r) {
      const int dof = members[a][r / bs] * bs + r % bs;
      for (int c = 0; c < m; ++c) local(r, c) = nullspace[c][dof];
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(local);
    const int k = std::min(rows, m);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(rows, k);
    Eigen::MatrixXd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    for (int j = 0; j < k; ++j) {
      if (r(j, j) < 0.0) {
        q.col(j) *= -1.0;
        r.row(j) *= -1.0;
      }
    }
    for (int row = 0; row < rows; ++row) {
      const int dof = members[a][row / bs] * bs + row % bs;
      for (int j = 0; j < k; ++j) {
        if (q(row, j) != 0.0) triplets.push_back({dof, a * m + j, q(row, j)});
      }
    }
    for (int j = 0; j < k; ++j) {
      for (int c = 0; c < m; ++c) coarse[c][a * m + j] = r(j, c);
    }
  }
  return {CsrMatrix::from_triplets(n, num_aggregates * m, std::move(triplets)), std::move(coarse)};
}

CsrMatrix symmetrized(const CsrMatrix& m) { return m.add(m.transpose()).scaled(0.5); }

}  // namespace

AmgHierarchy::AmgHierarchy(const CsrMatrix& matrix, const std::vector<Vector>& near_nullspace,
                           const AmgOptions& options)
    : options_(options) {
  if (matrix.rows() != matrix.cols()) throw std::invalid_argument("amg: matrix not square");
  if (near_nullspace.empty()) throw std::invalid_argument("amg: empty near-nullspace");
  if (options.block_size < 1 || matrix.rows() % options.block_size != 0) {
    throw std::invalid_argument("amg: block size does not divide the matrix size");
  }
  if (options.smoother.applications < 1) throw std::invalid_argument("amg: smoother applications must be >= 1");
  for (const auto& v : near_nullspace) {
    if (v.size() != static_cast<std::size_t>(matrix.rows())) {
      throw std::invalid_argument("amg: near-nullspace vector has wrong length");
    }
  }

  CsrMatrix A = matrix;
  std::vector<Vector> nullspace = near_nullspace;
  int bs = options.block_size;
  while (true) {
    Level level;
    level.A = std::move(A);
    level.block_size = bs;
    const int n = level.A.rows();
    level.inv_diag = level.A.diagonal();
    for (double& d : level.inv_diag) {
      if (!(d > 0.0)) throw std::invalid_argument("amg: non-positive diagonal entry");
      d = 1.0 / d;
    }
    const bool last = n <= options.max_coarse || static_cast<int>(levels_.size()) + 1 >= options.max_levels;
    if (last) {
      levels_.push_back(std::move(level));
      break;
    }

    level.lambda_max = options.smoother.eig_safety *
                       estimate_lambda_max(level.A, level.inv_diag, options.smoother.power_iterations);

    const auto strong = strength_graph(level.A, bs, options.strength_threshold);
    int num_aggregates = 0;
    const auto agg = aggregate(strong, num_aggregates);
    const int m = static_cast<int>(nullspace.size());
    const int coarse_n = num_aggregates * m;
    if (num_aggregates == 0 || coarse_n >= n) {
      levels_.push_back(std::move(level));
      break;
    }

    auto tent = tentative_prolongator(n, bs, agg, num_aggregates, nullspace);
    // P = (I - ω D⁻¹A) P_tent
    const double omega = options.prolongator_damping / (level.lambda_max / options.smoother.eig_safety);
    CsrMatrix AP = level.A.multiply(tent.P);
    for (int i = 0; i < AP.rows(); ++i) {
      for (int k = AP.row_ptr()[i]; k < AP.row_ptr()[i + 1]; ++k) {
        AP.values()[k] *= omega * level.inv_diag[i];
      }
    }
    level.P = tent.P.add(AP, -1.0);
    level.R = level.P.transpose();
    CsrMatrix coarse = symmetrized(level.R.multiply(level.A.multiply(level.P)));

    // Coarse dofs with a vanishing column of P (rank-deficient aggregate)
    // decouple; give them a unit diagonal so the hierarchy stays SPD.
    {
      const Vector d = coarse.diagonal();
      std::vector<Triplet> fix;
      const double scale = coarse.max_abs();
      for (int i = 0; i < coarse.rows(); ++i) {
        if (std::abs(d[i]) <= 1e-14 * scale) fix.push_back({i, i, scale > 0.0 ? scale : 1.0});
      }
      if (!fix.empty()) coarse = coarse.add(CsrMatrix::from_triplets(coarse.rows(), coarse.cols(), fix));
    }

    levels_.push_back(std::move(level));
    A = std::move(coarse);
    nullspace = std::move(tent.coarse_nullspace);
    bs = m;
  }

  const CsrMatrix& C = levels_.back().A;
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(C.rows(), C.cols());
  for (int i = 0; i < C.rows(); ++i) {
    for (int k = C.row_ptr()[i]; k < C.row_ptr()[i + 1]; ++k) dense(i, C.col_idx()[k]) = C.values()[k];
  }
  coarse_ = std::make_unique<Coarse>();
  coarse_->factor.compute(dense);
  if (coarse_->factor.info() != Eigen::Success) {
    throw std::runtime_error("amg: singular or indefinite coarse matrix");
  }
}

AmgHierarchy::~AmgHierarchy() = default;

int AmgHierarchy::size() const { return levels_.front().A.rows(); }
int AmgHierarchy::num_levels() const { return static_cast<int>(levels_.size()); }
const CsrMatrix& AmgHierarchy::level_matrix(int level) const { return levels_.at(level).A; }
const CsrMatrix& AmgHierarchy::prolongator(int level) const { return levels_.at(level).P; }

double AmgHierarchy::operator_complexity() const {
  double total = 0.0;
  for (const auto& l : levels_) total += static_cast<double>(l.A.nnz());
  return total / static_cast<double>(levels_.front().A.nnz());
}

std::string AmgHierarchy::summary() const {
  std::ostringstream os;
  os << "AMG hierarchy: " << levels_.size() << " levels, operator complexity "
     << operator_complexity() << "\n";
  for (std::size_t l = 0; l < levels_.size(); ++l) {
    os << "  level " << l << ": n = " << levels_[l].A.rows() << ", nnz = " << levels_[l].A.nnz()
       << ", block size = " << levels_[l].block_size << "\n";
  }
  return os.str();
}

void AmgHierarchy::smooth(const Level& level, std::span<const double> b, std::span<double> x) const {
  const CsrMatrix& A = level.A;
  const int n = A.rows();
  const auto& cfg = options_.smoother;
  if (cfg.kind == SmootherKind::SymmetricGaussSeidel) {
    const auto& rp = A.row_ptr();
    const auto& ci = A.col_idx();
    const auto& va = A.values();
    auto relax = [&](int i) {
      double s = b[i];
      for (int k = rp[i]; k < rp[i + 1]; ++k) {
        if (ci[k] != i) s -= va[k] * x[ci[k]];
      }
      x[i] = s * level.inv_diag[i];
    };
    for (int app = 0; app < cfg.applications; ++app) {
      for (int i = 0; i < n; ++i) relax(i);
      for (int i = n - 1; i >= 0; --i) relax(i);
    }
    return;
  }

  const double upper = level.lambda_max;
  const double lower = upper / cfg.eig_ratio;
  const double theta = 0.5 * (upper + lower);
  const double delta = 0.5 * (upper - lower);
  const double sigma = theta / delta;
  Vector r(n), d(n);
  for (int app = 0; app < cfg.applications; ++app) {
    A.multiply(x, r);
    for (int i = 0; i < n; ++i) {
      r[i] = b[i] - r[i];
      d[i] = level.inv_diag[i] * r[i] / theta;
    }
    double rho = 1.0 / sigma;
    for (int k = 1; k <= cfg.chebyshev_degree; ++k) {
      for (int i = 0; i < n; ++i) x[i] += d[i];
      if (k == cfg.chebyshev_degree) break;
      A.multiply(x, r);
      const double rho_new = 1.0 / (2.0 * sigma - rho);
      for (int i = 0; i < n; ++i) {
        r[i] = b[i] - r[i];
        d[i] = rho_new * rho * d[i] + 2.0 * rho_new / delta * level.inv_diag[i] * r[i];
      }
      rho = rho_new;
    }
  }
}

void AmgHierarchy::cycle(std::size_t l, std::span<const double> b, std::span<double> x) const {
  std::fill(x.begin(), x.end(), 0.0);
  if (l + 1 == levels_.size()) {
    Eigen::Map<const Eigen::VectorXd> rhs(b.data(), static_cast<Eigen::Index>(b.size()));
    Eigen::Map<Eigen::VectorXd> out(x.data(), static_cast<Eigen::Index>(x.size()));
    out = coarse_->factor.solve(rhs);
    return;
  }
  const Level& level = levels_[l];
  const int n = level.A.rows();
  smooth(level, b, x);
  Vector r(n);
  level.A.multiply(x, r);
  for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
  Vector bc(level.R.rows()), xc(level.R.rows()), correction(n);
  level.R.multiply(r, bc);
  cycle(l + 1, bc, xc);
  level.P.multiply(xc, correction);
  for (int i = 0; i < n; ++i) x[i] += correction[i];
  smooth(level, b, x);
}

void AmgHierarchy::apply(std::span<const double> b, std::span<double> x) const {
  if (b.size() != static_cast<std::size_t>(size()) || x.size() != b.size()) {
    throw std::invalid_argument("amg: dimension mismatch in V-cycle");
  }
  cycle(0, b, x);
}

std::vector<Vector> rigid_body_modes(std::span<const Point> nodes) {
  const std::size_t n = nodes.size();
  std::vector<Vector> modes(3, Vector(2 * n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    modes[0][2 * i] = 1.0;
    modes[1][2 * i + 1] = 1.0;
    modes[2][2 * i] = -nodes[i].z;
    modes[2][2 * i + 1] = nodes[i].x;
  }
  return modes;
}

double energy_contraction(const LinearOperator& vcycle, const CsrMatrix& matrix, int iterations,
                          unsigned seed) {
  const int n = matrix.rows();
  Vector e = random_vector(n, seed);
  Vector Me(n), correction(n);
  auto energy = [&](const Vector& v) {
    matrix.multiply(v, Me);
    return std::sqrt(std::max(dot(v, Me), 0.0));
  };
  double ratio = 0.0;
  for (int it = 0; it < iterations; ++it) {
    const double before = energy(e);
    if (before == 0.0) return 0.0;
    for (double& v : e) v /= before;
    matrix.multiply(e, Me);  // energy() left M e for the unnormalised vector
    vcycle.apply(Me, correction);
    for (int i = 0; i < n; ++i) e[i] -= correction[i];
    ratio = energy(e);
  }
  return ratio;
}

}  // namespace magma
