#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "magma/io.hpp"
#include "magma/problems.hpp"
#include "magma/sweep.hpp"

using namespace magma;

namespace {

int count_lines(const std::string& s) {
  return static_cast<int>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_CASE("vtk output") {
  const Mesh m = build_unit_square(2);
  const auto spaces = TaylorHoodSpaces::build(m);
  const Vector u = interpolate(spaces.velocity, [](const Point& x) { return Vec2{x.x, -x.z}; });
  const Vector p = interpolate(spaces.pressure, [](const Point& x) { return x.x + x.z; });
  const ScalarField k = constant_field(0.5);
  const auto uf = fluid_velocity(m, spaces, u, p, k, constant_field(0.01));
  std::ostringstream os;
  write_vtk(os, m, spaces, u, p, k, uf);
  const std::string s = os.str();
  CHECK(s.rfind("# vtk DataFile Version", 0) == 0);
  CHECK(s.find("DATASET UNSTRUCTURED_GRID") != std::string::npos);
  CHECK(s.find("POINTS 9 double") != std::string::npos);
  CHECK(s.find("CELLS 8 32") != std::string::npos);
  CHECK(s.find("CELL_TYPES 8") != std::string::npos);
  CHECK(s.find("POINT_DATA 9") != std::string::npos);
  CHECK(s.find("CELL_DATA 8") != std::string::npos);
  CHECK(s.find("VECTORS u double") != std::string::npos);
  CHECK(s.find("SCALARS p double") != std::string::npos);
  CHECK(s.find("SCALARS k double") != std::string::npos);
  CHECK(s.find("VECTORS u_f double") != std::string::npos);
  CHECK_THROWS(write_vtk("/nonexistent-dir/out.vtk", m, spaces, u, p, k, uf));
}

TEST_CASE("matrix market output") {
  CsrMatrix m = CsrMatrix::from_triplets(2, 3, {{0, 0, 1.5}, {1, 2, -2.0}});
  std::ostringstream os;
  write_matrix_market(os, m);
  std::istringstream in(os.str());
  std::string banner;
  std::getline(in, banner);
  CHECK(banner == "%%MatrixMarket matrix coordinate real general");
  int r = 0, c = 0, nnz = 0;
  in >> r >> c >> nnz;
  CHECK(r == 2);
  CHECK(c == 3);
  CHECK(nnz == 2);
  int i = 0, j = 0;
  double v = 0;
  in >> i >> j >> v;
  CHECK(i == 1);
  CHECK(j == 1);
  CHECK(v == 1.5);
  in >> i >> j >> v;
  CHECK(i == 2);
  CHECK(j == 3);
  CHECK(v == -2.0);
}

TEST_CASE("history and results csv") {
  SolverReport rep;
  rep.iterations = 2;
  rep.residual_history = {1.0, 0.1, 1e-9};
  rep.preconditioned_history = {1.0, 0.2, 2e-9};
  std::ostringstream os;
  write_history_csv(os, rep);
  CHECK(os.str().rfind("iteration,true_residual,preconditioned_residual\n", 0) == 0);
  CHECK(count_lines(os.str()) == 4);

  CHECK(results_csv_header() == "case,n,N_dofs,alpha,k_star,k_sup,pc,iterations,converged,vel_err,p_err,seconds");
  CaseConfig c;
  c.n = 4;
  c.alpha = 1.0;
  const CaseResult r = run_case(c);
  const std::string row = results_csv_row(r);
  CHECK(row.rfind("mms,4,", 0) == 0);
  CHECK(std::count(row.begin(), row.end(), ',') == 11);
  CHECK(row.find(",LU,") != std::string::npos);

  c.kind = CaseKind::WedgeCorner;
  const std::string wrow = results_csv_row(run_case(c));
  CHECK(wrow.rfind("wedge-corner,4,", 0) == 0);
  CHECK(wrow.find(",nan,nan,LU,") != std::string::npos);
}

TEST_CASE("real parsing") {
  CHECK(parse_real("2.5") == 2.5);
  CHECK(parse_real("-1/3") == doctest::Approx(-1.0 / 3.0));
  CHECK(parse_real("1e-4") == 1e-4);
  CHECK_THROWS_AS(parse_real("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_real("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_real("1/2/3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_real("3x"), std::invalid_argument);
}

TEST_CASE("sweep parsing and expansion") {
  std::istringstream in(
      "# table\n"
      "case = mms\n"
      "n = 8 16\n"
      "alpha = -1/3 0 1   # trailing comment\n"
      "\n"
      "k_star = 0.5\n"
      "pc = lu amg\n"
      "tol = 1e-6\n");
  const SweepGrid g = parse_sweep(in);
  CHECK(g.n == std::vector<int>{8, 16});
  CHECK(g.alpha.size() == 3);
  CHECK(g.tol == 1e-6);
  const auto cfgs = g.expand();
  REQUIRE(cfgs.size() == 12);
  CHECK(cfgs[0].n == 8);
  CHECK(cfgs[1].n == 16);
  CHECK(cfgs[0].alpha == doctest::Approx(-1.0 / 3.0));
  CHECK(cfgs[2].alpha == 0.0);
  CHECK(cfgs[0].pc == PreconditionerKind::Exact);
  CHECK(cfgs[6].pc == PreconditionerKind::Multigrid);
  for (const auto& c : cfgs) CHECK(c.tol == 1e-6);

  auto fails = [](const std::string& text, const std::string& needle) {
    std::istringstream bad(text);
    try {
      parse_sweep(bad);
    } catch (const std::invalid_argument& e) {
      return std::string(e.what()).find(needle) != std::string::npos;
    }
    return false;
  };
  CHECK(fails("n = 8\ncolour = red\n", "line 2"));
  CHECK(fails("n = eight\n", "line 1"));
  CHECK(fails("n =\n", "line 1"));
  CHECK(fails("alpha 1\n", "line 1"));
  CHECK(fails("n = 8\nn = 16\n", "line 2"));
  std::istringstream out_of_range("alpha = 5000\n");
  CHECK_THROWS_AS(parse_sweep(out_of_range).expand(), std::invalid_argument);
}

TEST_CASE("sweep run writes one row per configuration") {
  SweepGrid g;
  g.n = {4};
  g.alpha = {0.0, 1.0};
  std::ostringstream os;
  int seen = 0;
  const int failures = run_sweep(g.expand(), os, [&](const CaseResult&) { ++seen; });
  CHECK(failures == 0);
  CHECK(seen == 2);
  CHECK(count_lines(os.str()) == 3);
}
