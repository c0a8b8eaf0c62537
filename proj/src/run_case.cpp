#include "magma/run_case.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "magma/problems.hpp"

namespace magma {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  std::replace(out.begin(), out.end(), '_', '-');
  return out;
}

constexpr double kWedgePorosity = 0.01;

Vec2 slab_velocity(const Point&) {
  const double s = 1.0 / std::sqrt(2.0);
  return {s, -s};
}

}  // namespace

std::string to_string(CaseKind kind) {
  switch (kind) {
    case CaseKind::MmsSquare: return "mms";
    case CaseKind::WedgeCorner: return "wedge-corner";
    case CaseKind::WedgeTraction: return "wedge-traction";
  }
  return "?";
}

CaseKind parse_case_kind(std::string_view text) {
  const std::string s = lower(text);
  if (s == "mms" || s == "mms-square") return CaseKind::MmsSquare;
  if (s == "wedge-corner") return CaseKind::WedgeCorner;
  if (s == "wedge-traction") return CaseKind::WedgeTraction;
  throw std::invalid_argument("unknown case '" + std::string(text) + "'");
}

PreconditionerKind parse_preconditioner(std::string_view text) {
  const std::string s = lower(text);
  if (s == "lu") return PreconditionerKind::Exact;
  if (s == "amg") return PreconditionerKind::Multigrid;
  throw std::invalid_argument("unknown preconditioner '" + std::string(text) + "' (expected lu or amg)");
}

void validate(const CaseConfig& c) {
  if (!(c.alpha >= -1.0 / 3.0 - 1e-12 && c.alpha <= 1000.0)) {
    throw std::invalid_argument("alpha must lie in [-1/3, 1000]");
  }
  if (!(c.k_star >= 0.0 && c.k_star <= c.k_sup)) {
    throw std::invalid_argument("permeability range must satisfy 0 <= k_star <= k_sup");
  }
  const int min_n = c.kind == CaseKind::MmsSquare ? 1 : 2;
  if (c.n < min_n) throw std::invalid_argument("mesh parameter n too small");
  if (!(c.tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (c.max_iters < 1) throw std::invalid_argument("max_iters must be positive");
  if (c.smoother_apps && *c.smoother_apps < 1) throw std::invalid_argument("smoother applications must be positive");
}

AmgOptions velocity_amg_options(const CaseConfig& c) {
  AmgOptions opts;
  opts.block_size = 2;
  if (c.alpha >= 1000.0) {
    opts.smoother.kind = SmootherKind::SymmetricGaussSeidel;
    opts.smoother.applications = 4;
  }
  if (c.smoother) opts.smoother.kind = *c.smoother;
  if (c.smoother_apps) opts.smoother.applications = *c.smoother_apps;
  return opts;
}

CaseProblem build_problem(const CaseConfig& config) {
  validate(config);
  CaseProblem prob{config, nullptr, {}, {}, {}};
  const bool mms = config.kind == CaseKind::MmsSquare;
  prob.mesh = std::make_shared<const Mesh>(mms ? build_unit_square(config.n) : build_wedge2d(config.n));
  const Mesh& mesh = *prob.mesh;
  prob.spaces = TaylorHoodSpaces::build(mesh);
  prob.k = mms ? mms_kfield(config.k_star, config.k_sup) : wedge_kfield();

  LoadTerms loads;
  if (mms) {
    loads.source = mms_source(config.alpha, config.k_star, config.k_sup);
  } else {
    loads.porosity = constant_field(kWedgePorosity);
    loads.mass_permeability = prob.k;
  }
  BlockSystem raw = assemble_system(mesh, prob.spaces, config.alpha, prob.k, loads);

  std::vector<DirichletCondition> bcs;
  switch (config.kind) {
    case CaseKind::MmsSquare:
      bcs.push_back({BoundaryTag::All, mms_velocity(config.k_star, config.k_sup)});
      break;
    case CaseKind::WedgeCorner:
      // Later conditions win on shared nodes: the overplate no-slip value
      // holds at the trench corner.
      bcs.push_back({BoundaryTag::Open, [](const Point& x) { return corner_velocity(x.x, x.z); }});
      [[fallthrough]];
    case CaseKind::WedgeTraction:
      bcs.push_back({BoundaryTag::Slab, slab_velocity});
      bcs.push_back({BoundaryTag::Overplate, [](const Point&) { return Vec2{0.0, 0.0}; }});
      break;
  }
  prob.system = apply_dirichlet(std::move(raw), mesh, prob.spaces.velocity, bcs);
  return prob;
}

std::shared_ptr<BlockDiagonalPreconditioner> build_preconditioner(const CaseProblem& prob) {
  const BlockSystem& sys = prob.system;
  const CsrMatrix T = sys.Q.add(sys.Ck);
  std::shared_ptr<const LinearOperator> vel;
  std::shared_ptr<const LinearOperator> pre;
  if (prob.config.pc == PreconditionerKind::Exact) {
    vel = std::make_shared<CholeskyInverse>(sys.A);
    pre = std::make_shared<CholeskyInverse>(T);
  } else {
    vel = std::make_shared<AmgHierarchy>(sys.A, rigid_body_modes(prob.spaces.velocity.nodes()),
                                         velocity_amg_options(prob.config));
    AmgOptions popts;
    popts.smoother.kind = SmootherKind::SymmetricGaussSeidel;
    popts.smoother.applications = 1;
    pre = std::make_shared<AmgHierarchy>(T, std::vector<Vector>{Vector(T.rows(), 1.0)}, popts);
  }
  return std::make_shared<BlockDiagonalPreconditioner>(vel, pre, prob.config.pc);
}

CaseResult run_case(const CaseConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const CaseProblem prob = build_problem(config);
  const BlockSystem& sys = prob.system;
  const auto pc = build_preconditioner(prob);
  const BlockOperator op(sys.A, sys.B, sys.Ck);

  Vector rhs(sys.f);
  rhs.insert(rhs.end(), sys.g.begin(), sys.g.end());
  MinresOptions opts;
  opts.tol = config.tol;
  opts.max_iters = config.max_iters;
  if (sys.has_pressure_nullspace) opts.nullspace = PressureNullspace{sys.n_u(), sys.Q * Vector(sys.n_p(), 1.0)};

  CaseResult result;
  result.config = config;
  result.n_dofs = sys.size();
  result.setup_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  result.report = minres(op, *pc, rhs, opts);
  result.u.assign(result.report.solution.begin(), result.report.solution.begin() + sys.n_u());
  result.p.assign(result.report.solution.begin() + sys.n_u(), result.report.solution.end());
  result.mesh = prob.mesh;
  result.k = prob.k;
  result.vel_err = std::numeric_limits<double>::quiet_NaN();
  result.p_err = std::numeric_limits<double>::quiet_NaN();
  if (config.kind == CaseKind::MmsSquare) {
    const ErrorNorms e = error_norms(*prob.mesh, prob.spaces, result.u, result.p,
                                     mms_velocity(config.k_star, config.k_sup), mms_pressure());
    result.vel_err = e.velocity;
    result.p_err = e.pressure;
  }
  return result;
}

}  // namespace magma
