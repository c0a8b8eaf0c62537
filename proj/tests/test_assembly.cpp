#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include "magma/assembly.hpp"
#include "magma/cholesky.hpp"
#include "magma/problems.hpp"

using namespace magma;

namespace {

Mesh reference_triangle() {
  return Mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}},
              {{{0, 1}, BoundaryTag::All}, {{1, 2}, BoundaryTag::All}, {{2, 0}, BoundaryTag::All}});
}

Vector random_vector(int n, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> d(-1, 1);
  Vector v(n);
  for (auto& x : v) x = d(gen);
  return v;
}

double quad(const CsrMatrix& m, const Vector& v) { return dot(v, m * v); }

DirichletCondition zero_on(BoundaryTag tag) {
  return {tag, [](const Point&) { return Vec2{}; }};
}

}  // namespace

TEST_CASE("single-cell A entries match symbolic integration") {
  // Reference values from exact polynomial integration on the reference triangle.
  const Mesh m = reference_triangle();
  const DofMap v = DofMap::p2_vector(m);
  struct Entry {
    int a, ca, b, cb;
    double alpha0, alpha1;
  };
  const Entry entries[] = {{0, 0, 0, 0, 0.75, 1.25},
                           {0, 0, 3, 1, 0.0, 0.0},
                           {3, 0, 5, 1, -1.0 / 3.0, -1.0},
                           {4, 1, 4, 1, 2.0, 10.0 / 3.0},
                           {1, 0, 2, 1, 0.0, -1.0 / 6.0}};
  const CsrMatrix A0 = assemble_A(m, v, 0.0);
  const CsrMatrix A1 = assemble_A(m, v, 1.0);
  for (const auto& e : entries) {
    CHECK(A0.at(v.dof(0, e.a, e.ca), v.dof(0, e.b, e.cb)) == doctest::Approx(e.alpha0).epsilon(1e-13));
    CHECK(A1.at(v.dof(0, e.a, e.ca), v.dof(0, e.b, e.cb)) == doctest::Approx(e.alpha1).epsilon(1e-13));
  }
}

TEST_CASE("single-cell B entries match symbolic integration") {
  const Mesh m = reference_triangle();
  const DofMap v = DofMap::p2_vector(m);
  const DofMap p = DofMap::p1_scalar(m);
  const CsrMatrix B = assemble_B(m, v, p);
  CHECK(B.rows() == 3);
  CHECK(B.cols() == 12);
  CHECK(B.at(p.dof(0, 0), v.dof(0, 3, 0)) == doctest::Approx(-1.0 / 6.0));
  CHECK(std::abs(B.at(p.dof(0, 1), v.dof(0, 0, 1))) < 1e-14);
  CHECK(std::abs(B.at(p.dof(0, 2), v.dof(0, 5, 0))) < 1e-14);
  CHECK(B.at(p.dof(0, 0), v.dof(0, 4, 1)) == doctest::Approx(-1.0 / 6.0));
}

TEST_CASE("single-triangle mass matrix") {
  const Mesh m = reference_triangle();
  const CsrMatrix Q = assemble_Q(m, DofMap::p1_scalar(m));
  const double area = 0.5;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) CHECK(Q.at(i, j) == doctest::Approx(area / 12.0 * (i == j ? 2.0 : 1.0)));
  }
}

TEST_CASE("mass matrix integrates the domain area") {
  for (const Mesh& m : {build_unit_square(7), build_wedge2d(6)}) {
    const CsrMatrix Q = assemble_Q(m, DofMap::p1_scalar(m));
    const Vector ones(Q.rows(), 1.0);
    CHECK(quad(Q, ones) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(Q.is_symmetric());
    CHECK(quad(Q, random_vector(Q.rows(), 5)) > 0.0);
  }
}

TEST_CASE("A is symmetric, linear in alpha and rejects alpha <= -1") {
  const Mesh m = build_wedge2d(4);
  const DofMap v = DofMap::p2_vector(m);
  const CsrMatrix A0 = assemble_A(m, v, 0.0);
  const CsrMatrix D = assemble_velocity_form(m, v, VelocityForm::DivDiv);
  const CsrMatrix E = assemble_velocity_form(m, v, VelocityForm::Strain);
  for (double alpha : {-1.0 / 3.0, 1.0, 100.0}) {
    const CsrMatrix A = assemble_A(m, v, alpha);
    CHECK(A.is_symmetric(1e-14));
    CHECK(A.add(A0.add(D, alpha), -1.0).max_abs() <= 1e-12 * A.max_abs());
  }
  CHECK(A0.add(E, -1.0).max_abs() == 0.0);
  CHECK_THROWS_AS(assemble_A(m, v, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(assemble_A(m, v, -2.5), std::invalid_argument);
}

TEST_CASE("norm inequality chain on fields vanishing on the boundary") {
  const Mesh m = build_unit_square(6);
  const DofMap v = DofMap::p2_vector(m);
  const CsrMatrix D = assemble_velocity_form(m, v, VelocityForm::DivDiv);
  const CsrMatrix E = assemble_velocity_form(m, v, VelocityForm::Strain);
  const CsrMatrix G = assemble_velocity_form(m, v, VelocityForm::Gradient);
  const auto bdofs = v.boundary_dofs(m, BoundaryTag::All);
  for (unsigned seed = 1; seed <= 20; ++seed) {
    Vector x = random_vector(v.n_dofs(), seed);
    for (int d : bdofs) x[d] = 0.0;
    const double d = quad(D, x), e = quad(E, x), g = quad(G, x);
    CHECK(d <= e * (1 + 1e-12));
    CHECK(e <= g * (1 + 1e-12));
    CHECK(e > 0.0);
  }
}

TEST_CASE("permeability matrix") {
  const Mesh m = build_unit_square(5);
  const DofMap p = DofMap::p1_scalar(m);
  CHECK(assemble_Ck(m, p, constant_field(0.0)).max_abs() == 0.0);
  const CsrMatrix C1 = assemble_Ck(m, p, constant_field(1.0));
  const Vector c1 = C1 * Vector(p.n_dofs(), 1.0);
  CHECK(norm2(c1) < 1e-13);
  CHECK(C1.is_symmetric());
  const double k_star = 0.3;
  const CsrMatrix Ck = assemble_Ck(m, p, mms_kfield(k_star, 2.0));
  for (unsigned seed = 1; seed <= 10; ++seed) {
    const Vector q = random_vector(p.n_dofs(), seed);
    CHECK(quad(Ck, q) >= k_star * quad(C1, q) * (1 - 1e-12));
    CHECK(quad(Ck, q) >= 0.0);
  }
  CHECK_THROWS_AS(assemble_Ck(m, p, [](const Point& x) { return x.x - 0.5; }), std::domain_error);
  CHECK_THROWS_AS(assemble_Ck(m, p, constant_field(std::nan(""))), std::domain_error);
}

TEST_CASE("divergence of constants and the constant-pressure nullspace") {
  const Mesh m = build_unit_square(4);
  const auto spaces = TaylorHoodSpaces::build(m);
  const CsrMatrix B = assemble_B(m, spaces.velocity, spaces.pressure);
  const Vector u = interpolate(spaces.velocity, [](const Point&) { return Vec2{0.7, -1.3}; });
  CHECK(norm2(B * u) < 1e-13);

  BlockSystem sys = assemble_system(m, spaces, 1.0, constant_field(1.0), {});
  const DirichletCondition bc = zero_on(BoundaryTag::All);
  sys = apply_dirichlet(std::move(sys), m, spaces.velocity, std::span(&bc, 1));
  CHECK(sys.has_pressure_nullspace);
  Vector bt(sys.n_u());
  sys.B.multiply_transpose(Vector(sys.n_p(), 1.0), bt);
  CHECK(norm2(bt) < 1e-13);
}

TEST_CASE("right-hand side loads") {
  const Mesh m = build_wedge2d(4);
  const auto spaces = TaylorHoodSpaces::build(m);
  const RhsVectors zero = assemble_rhs(m, spaces.velocity, spaces.pressure, {});
  CHECK(*std::max_element(zero.f.begin(), zero.f.end()) == 0.0);
  CHECK(*std::min_element(zero.g.begin(), zero.g.end()) == 0.0);

  LoadTerms unit, wedge;
  unit.porosity = constant_field(1.0);
  wedge.porosity = constant_field(0.01);
  const RhsVectors fu = assemble_rhs(m, spaces.velocity, spaces.pressure, unit);
  const RhsVectors fw = assemble_rhs(m, spaces.velocity, spaces.pressure, wedge);
  double total_z = 0.0;
  for (int i = 0; i < spaces.velocity.n_dofs(); ++i) {
    CHECK(fw.f[i] == doctest::Approx(0.01 * fu.f[i]));
    if (i % 2 == 0) CHECK(fu.f[i] == 0.0);
    else total_z += fu.f[i];
  }
  CHECK(total_z == doctest::Approx(1.0));  // ∫ e₃·(sum of basis) = area

  // g = -∫ k ∂_z ψ; for k = 1 the sum over ψ vanishes (partition of unity).
  LoadTerms mass;
  mass.mass_permeability = constant_field(1.0);
  const RhsVectors g = assemble_rhs(m, spaces.velocity, spaces.pressure, mass);
  double gsum = 0.0;
  for (double x : g.g) gsum += x;
  CHECK(std::abs(gsum) < 1e-13);
  // ψ = z has ∂_z ψ = 1: Σ_i z_i g_i = -∫ k = -1
  double gz = 0.0;
  for (std::size_t i = 0; i < g.g.size(); ++i) gz += m.vertices()[i].z * g.g[i];
  CHECK(gz == doctest::Approx(-1.0));
}

TEST_CASE("Dirichlet elimination") {
  const Mesh m = build_unit_square(4);
  const auto spaces = TaylorHoodSpaces::build(m);
  LoadTerms loads;
  loads.porosity = constant_field(1.0);
  const BlockSystem raw = assemble_system(m, spaces, 0.5, constant_field(0.1), loads);

  SUBCASE("homogeneous data leaves free rows alone") {
    const DirichletCondition bc = zero_on(BoundaryTag::All);
    const BlockSystem s = apply_dirichlet(raw, m, spaces.velocity, std::span(&bc, 1));
    for (int i = 0; i < s.n_u(); ++i) {
      if (s.dirichlet_mask[i]) {
        CHECK(s.f[i] == 0.0);
        CHECK(s.A.at(i, i) == 1.0);
      } else {
        CHECK(s.f[i] == raw.f[i]);
      }
    }
    CHECK(s.A.is_symmetric());
    CHECK_NOTHROW(SparseCholesky(s.A));
    CHECK(s.free_velocity_dofs().size() + spaces.velocity.boundary_dofs(m, BoundaryTag::All).size() ==
          static_cast<std::size_t>(s.n_u()));
  }

  SUBCASE("lifting reproduces the boundary data") {
    const VectorField data = [](const Point& x) { return Vec2{x.x * x.z + 1.0, x.x - 2.0 * x.z}; };
    const DirichletCondition bc{BoundaryTag::All, data};
    const BlockSystem s = apply_dirichlet(raw, m, spaces.velocity, std::span(&bc, 1));
    const Vector u = SparseCholesky(s.A).solve(s.f);
    for (int node : spaces.velocity.boundary_nodes(m, BoundaryTag::All)) {
      const Vec2 want = data(spaces.velocity.nodes()[node]);
      CHECK(u[2 * node] == doctest::Approx(want.x));
      CHECK(u[2 * node + 1] == doctest::Approx(want.z));
    }
    // The mean of g is removed for consistency with the nullspace.
    double gsum = 0.0;
    for (double g : s.g) gsum += g;
    CHECK(std::abs(gsum) < 1e-12);
  }

  SUBCASE("unknown tags are rejected") {
    const DirichletCondition bc = zero_on(BoundaryTag::Slab);
    CHECK_THROWS_AS(apply_dirichlet(raw, m, spaces.velocity, std::span(&bc, 1)), std::invalid_argument);
  }

  SUBCASE("non-finite boundary data is rejected") {
    const DirichletCondition bc{BoundaryTag::All, [](const Point&) { return Vec2{std::nan(""), 0.0}; }};
    CHECK_THROWS_AS(apply_dirichlet(raw, m, spaces.velocity, std::span(&bc, 1)), std::domain_error);
  }
}

TEST_CASE("wedge nullspace flag follows boundary coverage") {
  const Mesh m = build_wedge2d(4);
  const auto spaces = TaylorHoodSpaces::build(m);
  const BlockSystem raw = assemble_system(m, spaces, 1.0, wedge_kfield(), {});
  const std::vector<DirichletCondition> traction{zero_on(BoundaryTag::Slab), zero_on(BoundaryTag::Overplate)};
  CHECK_FALSE(apply_dirichlet(raw, m, spaces.velocity, traction).has_pressure_nullspace);
  std::vector<DirichletCondition> corner = traction;
  corner.push_back(zero_on(BoundaryTag::Open));
  CHECK(apply_dirichlet(raw, m, spaces.velocity, corner).has_pressure_nullspace);
}

TEST_CASE("later Dirichlet conditions win on shared nodes") {
  const Mesh m = build_wedge2d(4);
  const auto spaces = TaylorHoodSpaces::build(m);
  const BlockSystem raw = assemble_system(m, spaces, 1.0, wedge_kfield(), {});
  const std::vector<DirichletCondition> bcs{{BoundaryTag::Slab, [](const Point&) { return Vec2{1.0, 1.0}; }},
                                            {BoundaryTag::Overplate, [](const Point&) { return Vec2{2.0, 2.0}; }}};
  const BlockSystem s = apply_dirichlet(raw, m, spaces.velocity, bcs);
  for (int node = 0; node < spaces.velocity.n_nodes(); ++node) {
    const Point& x = spaces.velocity.nodes()[node];
    if (std::abs(x.x) < 1e-12 && std::abs(x.z - 1.0) < 1e-12) CHECK(s.f[2 * node] == 2.0);
  }
}

TEST_CASE("assembly is independent of cell order") {
  const Mesh m = build_unit_square(3);
  std::vector<std::array<int, 3>> cells = m.cells();
  std::reverse(cells.begin(), cells.end());
  for (auto& c : cells) std::rotate(c.begin(), c.begin() + 1, c.end());
  std::vector<std::pair<std::array<int, 2>, BoundaryTag>> facets;
  for (const auto& f : m.boundary_facets()) facets.push_back({f.vertices, f.tag});
  const Mesh shuffled(m.vertices(), cells, facets);

  const auto sa = TaylorHoodSpaces::build(m);
  const auto sb = TaylorHoodSpaces::build(shuffled);
  auto key = [](const Point& p) { return std::make_pair(std::lround(p.x * 1e6), std::lround(p.z * 1e6)); };
  std::map<std::pair<long, long>, int> node_b;
  for (int i = 0; i < sb.velocity.n_nodes(); ++i) node_b[key(sb.velocity.nodes()[i])] = i;
  std::vector<int> perm(sa.velocity.n_dofs());
  for (int i = 0; i < sa.velocity.n_nodes(); ++i) {
    const int j = node_b.at(key(sa.velocity.nodes()[i]));
    perm[2 * i] = 2 * j;
    perm[2 * i + 1] = 2 * j + 1;
  }
  const CsrMatrix A = assemble_A(m, sa.velocity, 2.0);
  const CsrMatrix Ab = assemble_A(shuffled, sb.velocity, 2.0);
  double worst = 0.0;
  for (int i = 0; i < A.rows(); ++i) {
    for (int k = A.row_ptr()[i]; k < A.row_ptr()[i + 1]; ++k) {
      worst = std::max(worst, std::abs(A.values()[k] - Ab.at(perm[i], perm[A.col_idx()[k]])));
    }
  }
  CHECK(worst <= 1e-14 * A.max_abs());
  CHECK(A.nnz() == Ab.nnz());

  // P1 numbering is the vertex numbering in both meshes.
  const CsrMatrix B = assemble_B(m, sa.velocity, sa.pressure);
  const CsrMatrix Bb = assemble_B(shuffled, sb.velocity, sb.pressure);
  double worst_b = 0.0;
  for (int i = 0; i < B.rows(); ++i) {
    for (int k = B.row_ptr()[i]; k < B.row_ptr()[i + 1]; ++k) {
      worst_b = std::max(worst_b, std::abs(B.values()[k] - Bb.at(i, perm[B.col_idx()[k]])));
    }
  }
  CHECK(worst_b <= 1e-14 * B.max_abs());
}
