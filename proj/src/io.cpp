#include "magma/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace magma {

void write_vtk(std::ostream& out, const Mesh& mesh, const TaylorHoodSpaces& spaces, const Vector& u,
               const Vector& p, const ScalarField& k, const std::vector<Vec2>& fluid) {
  const auto& verts = mesh.vertices();
  const auto& cells = mesh.cells();
  const std::size_t nv = verts.size();
  const std::size_t nc = cells.size();
  if (u.size() != static_cast<std::size_t>(spaces.velocity.n_dofs()) || p.size() != nv ||
      (!fluid.empty() && fluid.size() != nc)) {
    throw std::invalid_argument("write_vtk: field sizes do not match the mesh");
  }
  out << std::setprecision(12);
  out << "# vtk DataFile Version 3.0\nmagma solution\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << nv << " double\n";
  for (const auto& v : verts) out << v.x << ' ' << v.z << " 0\n";
  out << "CELLS " << nc << ' ' << 4 * nc << '\n';
  for (const auto& c : cells) out << "3 " << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
  out << "CELL_TYPES " << nc << '\n';
  for (std::size_t c = 0; c < nc; ++c) out << "5\n";

  // Vertices are the first P2 nodes.
  out << "POINT_DATA " << nv << "\nVECTORS u double\n";
  for (std::size_t i = 0; i < nv; ++i) out << u[2 * i] << ' ' << u[2 * i + 1] << " 0\n";
  out << "SCALARS p double 1\nLOOKUP_TABLE default\n";
  for (double v : p) out << v << '\n';
  if (k) {
    out << "SCALARS k double 1\nLOOKUP_TABLE default\n";
    for (const auto& v : verts) out << k(v) << '\n';
  }
  if (!fluid.empty()) {
    out << "CELL_DATA " << nc << "\nVECTORS u_f double\n";
    for (const auto& f : fluid) out << f.x << ' ' << f.z << " 0\n";
  }
}

void write_vtk(const std::string& path, const Mesh& mesh, const TaylorHoodSpaces& spaces, const Vector& u,
               const Vector& p, const ScalarField& k, const std::vector<Vec2>& fluid) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_vtk(f, mesh, spaces, u, p, k, fluid);
}

void write_matrix_market(std::ostream& out, const CsrMatrix& m) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows() << ' ' << m.cols() << ' ' << m.nnz() << '\n' << std::setprecision(17);
  for (int i = 0; i < m.rows(); ++i) {
    for (int k = m.row_ptr()[i]; k < m.row_ptr()[i + 1]; ++k) {
      out << i + 1 << ' ' << m.col_idx()[k] + 1 << ' ' << m.values()[k] << '\n';
    }
  }
}

void write_history_csv(std::ostream& out, const SolverReport& report) {
  out << "iteration,true_residual,preconditioned_residual\n" << std::setprecision(10);
  for (std::size_t i = 0; i < report.residual_history.size(); ++i) {
    out << i << ',' << report.residual_history[i] << ',';
    if (i < report.preconditioned_history.size()) out << report.preconditioned_history[i];
    out << '\n';
  }
}

std::string results_csv_header() {
  return "case,n,N_dofs,alpha,k_star,k_sup,pc,iterations,converged,vel_err,p_err,seconds";
}

std::string results_csv_row(const CaseResult& r) {
  std::ostringstream os;
  auto num = [&os](double v) {
    if (std::isnan(v)) os << "nan";
    else os << v;
  };
  const CaseConfig& c = r.config;
  os << std::setprecision(8) << to_string(c.kind) << ',' << c.n << ',' << r.n_dofs << ',' << c.alpha << ',';
  // The permeability range only parametrises the manufactured case.
  if (c.kind == CaseKind::MmsSquare) os << c.k_star << ',' << c.k_sup;
  else os << "nan,nan";
  os << ',' << to_string(c.pc) << ',' << r.report.iterations << ',' << (r.report.converged ? 1 : 0) << ',';
  num(r.vel_err);
  os << ',';
  num(r.p_err);
  os << ',' << r.setup_seconds + r.report.seconds;
  return os.str();
}

}  // namespace magma
