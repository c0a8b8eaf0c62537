// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance                  run everything, exit 1 if anything fails
//   acceptance --only 3 5       run a subset
//   acceptance --expect-fail 4  exit 0 iff exactly the listed criteria fail
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "magma/problems.hpp"
#include "magma/run_case.hpp"
#include "magma/spectral.hpp"

using namespace magma;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [violated: " << what << "]";
    }
  }
};

const std::vector<int> kRefinements{32, 64, 128};

// Every LU run is cached: criterion 4 reuses the runs of 1 to 3.
std::map<std::tuple<int, int, double, double, double, int>, CaseResult> g_cache;

const CaseResult& solve(CaseKind kind, int n, double alpha, double k_star, double k_sup,
                        PreconditionerKind pc = PreconditionerKind::Exact) {
  const auto key = std::make_tuple(static_cast<int>(kind), n, alpha, k_star, k_sup, static_cast<int>(pc));
  auto it = g_cache.find(key);
  if (it != g_cache.end()) return it->second;
  CaseConfig c;
  c.kind = kind;
  c.n = n;
  c.alpha = alpha;
  c.k_star = k_star;
  c.k_sup = k_sup;
  c.pc = pc;
  return g_cache.emplace(key, run_case(c)).first->second;
}

struct LuConfig {
  double alpha;
  double k_star;
  double k_sup;
};

struct AlphaRow {
  double alpha;
  std::string label;
  std::vector<int> counts;
};

const std::vector<AlphaRow> kAlphaRows{
    {-1.0 / 3.0, "-1/3", {9, 9, 8}}, {0.0, "0", {9, 9, 8}}, {1.0, "1", {9, 9, 9}}, {10.0, "10", {8, 8, 7}}};

struct SpotCheck {
  LuConfig cfg;
  std::string label;
  int lo;
  int hi;
};

const std::vector<SpotCheck> kLowAlphaChecks{
    {{1.0, 0.0, 1e-4}, "k*=1e-4", 29, 35},
    {{1.0, 0.5, 1.0}, "k*=1", 7, 11},
    {{1.0, 0.0, 1000.0}, "k*=1000", 2, 4},
    {{1.0, 0.0, 1e8}, "k*=1e8", 0, 3},
};

const std::vector<SpotCheck> kHighAlphaChecks{
    {{100.0, 0.0, 1e-4}, "k*=1e-4", 61, 73},
    {{100.0, 0.0, 1.0}, "k*=1", 25, 31},
    {{100.0, 0.0, 1000.0}, "k*=1000", 2, 4},
};

void criterion1(Outcome& o) {
  double slowest = 0.0;
  for (const auto& row : kAlphaRows) {
    o.detail << " a=" << row.label << ":";
    for (std::size_t i = 0; i < kRefinements.size(); ++i) {
      const CaseResult& r = solve(CaseKind::MmsSquare, kRefinements[i], row.alpha, 0.5, 1.5);
      o.detail << (i ? "/" : "") << r.report.iterations;
      o.require(r.report.converged, "converged");
      o.require(std::abs(r.report.iterations - row.counts[i]) <= 2, "a=" + row.label + " within 2 of reference");
      slowest = std::max(slowest, r.setup_seconds + r.report.seconds);
    }
  }
  o.detail << " slowest run " << slowest << " s";
  o.require(slowest <= 30.0, "seconds per run");
}

void spot_checks(Outcome& o, const std::vector<SpotCheck>& checks) {
  for (const auto& c : checks) {
    const CaseResult& r = solve(CaseKind::MmsSquare, 32, c.cfg.alpha, c.cfg.k_star, c.cfg.k_sup);
    o.detail << " " << c.label << ": " << r.report.iterations;
    o.require(r.report.converged && r.report.iterations >= c.lo && r.report.iterations <= c.hi,
              c.label + " in [" + std::to_string(c.lo) + ", " + std::to_string(c.hi) + "]");
  }
}

void criterion4(Outcome& o) {
  std::vector<std::pair<std::string, LuConfig>> configs;
  for (const auto& row : kAlphaRows) configs.push_back({"a=" + row.label, {row.alpha, 0.5, 1.5}});
  for (const auto& c : kLowAlphaChecks) configs.push_back({"a=1 " + c.label, c.cfg});
  for (const auto& c : kHighAlphaChecks) configs.push_back({"a=100 " + c.label, c.cfg});
  for (const auto& [label, cfg] : configs) {
    int lo = 1 << 30, hi = 0;
    for (int n : kRefinements) {
      const int it = solve(CaseKind::MmsSquare, n, cfg.alpha, cfg.k_star, cfg.k_sup).report.iterations;
      lo = std::min(lo, it);
      hi = std::max(hi, it);
    }
    if (hi - lo > 3) o.detail << " " << label << " spread " << hi - lo;
    o.require(hi - lo <= 3, label + " spread <= 3");
  }
  if (o.pass) o.detail << " all spreads <= 3";
}

std::vector<BoundsReport> g_bounds;

const std::vector<BoundsReport>& bounds_sweep() {
  if (!g_bounds.empty()) return g_bounds;
  for (int n : {4, 8}) {
    const Mesh mesh = build_unit_square(n);
    const auto spaces = TaylorHoodSpaces::build(mesh);
    const DirichletCondition bc{BoundaryTag::All, [](const Point&) { return Vec2{}; }};
    for (double alpha : {-1.0 / 3.0, 0.0, 1.0, 10.0, 100.0}) {
      for (bool tanh : {false, true}) {
        const ScalarField k = tanh ? mms_kfield(0.5, 1.5) : constant_field(0.0);
        BlockSystem s = assemble_system(mesh, spaces, alpha, k, {});
        s = apply_dirichlet(std::move(s), mesh, spaces.velocity, std::span(&bc, 1));
        g_bounds.push_back(compute_bounds(mesh, spaces, s, tanh ? 0.5 : 0.0));
      }
    }
  }
  return g_bounds;
}

void criterion5(Outcome& o) {
  int violations = 0;
  for (const auto& r : bounds_sweep()) {
    violations += r.eig_violations;
    o.require(r.eig_contained, "eigenvalues inside the intervals");
  }
  o.detail << " " << bounds_sweep().size() << " configurations, " << violations << " violations";
}

void criterion6(Outcome& o) {
  double worst_lo = 1e300, worst_hi = 1e300, worst_43 = 1e300;
  for (const auto& r : bounds_sweep()) {
    worst_lo = std::min(worst_lo, r.rayleigh.min - r.predicted.c_lower);
    worst_hi = std::min(worst_hi, r.predicted.c_upper - r.rayleigh.max);
    worst_43 = std::min(worst_43, r.predicted.c_upper - r.coupling_max);
    o.require(r.schur_contained, "Schur extremes in [c_q, c^q]");
    o.require(r.coupling_contained, "B^T (Q+C)^-1 B maximum <= c^q");
  }
  o.detail << " min margins: lower " << worst_lo << ", upper " << worst_hi << ", B^T(Q+C)^-1 B " << worst_43;
}

void criterion7(Outcome& o) {
  const CaseResult& a = solve(CaseKind::MmsSquare, 16, 1.0, 0.5, 1.5);
  const CaseResult& b = solve(CaseKind::MmsSquare, 32, 1.0, 0.5, 1.5);
  const double ru = a.vel_err / b.vel_err;
  const double rp = a.p_err / b.p_err;
  o.detail << " velocity ratio " << ru << ", pressure ratio " << rp;
  o.require(ru >= 6.0 && ru <= 10.0, "velocity ratio in [6, 10]");
  o.require(rp >= 3.0, "pressure ratio >= 3");
}

Vector random_vector(int n, std::mt19937& gen) {
  std::normal_distribution<double> d;
  Vector v(static_cast<std::size_t>(n));
  for (double& x : v) x = d(gen);
  return v;
}

double dotv(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void criterion8(Outcome& o) {
  // (a) symmetry of both V-cycles and (d) the spectral sandwich, on the n = 32 α = 1 problem
  CaseConfig c;
  c.n = 32;
  c.alpha = 1.0;
  c.pc = PreconditionerKind::Multigrid;
  const CaseProblem prob = build_problem(c);
  const auto pc = build_preconditioner(prob);
  std::mt19937 gen(2024);
  double asym = 0.0;
  for (const LinearOperator* v : {&pc->velocity_inverse(), &pc->pressure_inverse()}) {
    for (int t = 0; t < 5; ++t) {
      const Vector x = random_vector(v->size(), gen), y = random_vector(v->size(), gen);
      const double a = dotv(y, (*v)(x)), b = dotv(x, (*v)(y));
      asym = std::max(asym, std::abs(a - b) / std::max(std::abs(a), std::abs(b)));
    }
  }
  o.detail << " (a) asymmetry " << asym;
  o.require(asym <= 1e-10, "(a) V-cycle symmetric");

  // (b), (c)
  std::map<double, std::vector<int>> counts;
  for (double alpha : {1.0, 10.0, 100.0}) {
    for (int n : kRefinements) {
      const CaseResult& r = solve(CaseKind::MmsSquare, n, alpha, 0.5, 1.5, PreconditionerKind::Multigrid);
      counts[alpha].push_back(r.report.iterations);
      if (alpha != 100.0) o.require(r.report.converged, "(b) AMG converges");
    }
  }
  for (const auto& [alpha, v] : counts) o.detail << " a=" << alpha << ": " << v[0] << "/" << v[1] << "/" << v[2];
  for (std::size_t i = 1; i < counts[1.0].size(); ++i) {
    o.require(counts[1.0][i] <= 1.6 * counts[1.0][i - 1], "(b) growth <= 1.6 per refinement");
  }
  for (std::size_t i = 0; i < kRefinements.size(); ++i) {
    o.require(counts[100.0][i] > counts[1.0][i], "(c) a=100 needs more iterations than a=1");
  }

  // (d)
  const LinearOperator& vel = pc->velocity_inverse();
  const CsrMatrix& A = prob.system.A;
  const double rho = energy_contraction(vel, A);
  double rmin = 1e300, rmax = -1e300;
  for (int t = 0; t < 50; ++t) {
    const Vector w = random_vector(A.rows(), gen);
    const Vector y = vel(w);
    const double r = dotv(y, A * y) / dotv(w, y);
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
  }
  o.detail << " (d) rho " << rho << ", Rayleigh in [" << rmin << ", " << rmax << "]";
  o.require(rho < 1.0, "(d) contraction below 1");
  o.require(rmin >= 1.0 - rho && rmax <= 1.0 + rho, "(d) 1-rho <= Rayleigh <= 1+rho");
}

void criterion9(Outcome& o) {
  // The reference counts span 23 to 30 on unstructured meshes; the structured
  // wedge is accepted within 6 of that range.
  for (CaseKind kind : {CaseKind::WedgeCorner, CaseKind::WedgeTraction}) {
    o.detail << " " << to_string(kind) << ":";
    for (double alpha : {1.0, 10.0, 100.0}) {
      int lo = 1 << 30, hi = 0;
      o.detail << " a=" << alpha << " ";
      for (std::size_t i = 0; i < kRefinements.size(); ++i) {
        const CaseResult& r = solve(kind, kRefinements[i], alpha, 0.5, 1.5);
        o.detail << (i ? "/" : "") << r.report.iterations;
        o.require(r.report.converged, "converged");
        lo = std::min(lo, r.report.iterations);
        hi = std::max(hi, r.report.iterations);
      }
      o.require(hi - lo <= 6, "spread <= 6");
      o.require(lo >= 17 && hi <= 36, "counts in [17, 36]");
    }
  }
}

void criterion10(Outcome& o) {
  const Mesh m = build_unit_square(16);
  const double cp = estimate_poincare(m, TaylorHoodSpaces::build(m));
  const double pi2 = std::numbers::pi * std::numbers::pi;
  o.detail << " cP = " << cp << " (relative deviation " << std::abs(cp - pi2) / pi2 << ")";
  o.require(std::abs(cp - pi2) <= 0.02 * pi2, "within 2% of pi^2");
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only, expect_fail;
  std::set<int>* target = nullptr;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only") {
      target = &only;
    } else if (a == "--expect-fail") {
      target = &expect_fail;
    } else if (target) {
      target->insert(std::atoi(a.c_str()));
    } else {
      std::cerr << "usage: acceptance [--only N...] [--expect-fail N...]\n";
      return 1;
    }
  }

  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"LU iterations on the manufactured problem", criterion1},
      {"LU spot checks, alpha = 1", [](Outcome& o) { spot_checks(o, kLowAlphaChecks); }},
      {"LU spot checks, alpha = 100", [](Outcome& o) { spot_checks(o, kHighAlphaChecks); }},
      {"LU iteration spread <= 3 across refinements", criterion4},
      {"block eigenvalue containment", criterion5},
      {"Schur complement bounds", criterion6},
      {"Taylor-Hood convergence rates", criterion7},
      {"AMG properties", criterion8},
      {"wedge cases", criterion9},
      {"Poincare constant", criterion10},
  };

  std::set<int> failed;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    if (!o.pass) failed.insert(id);
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << criteria[i].first << " |"
              << o.detail.str() << std::endl;
  }

  if (expect_fail.empty()) return failed.empty() ? 0 : 1;
  std::set<int> expected;
  for (int id : expect_fail) {
    if (only.empty() || only.count(id)) expected.insert(id);
  }
  if (failed != expected) {
    std::cout << "unexpected outcome: the failing set differs from --expect-fail" << std::endl;
    return 1;
  }
  return 0;
}
