// Command-line driver: single runs, spectral bound checks and parameter sweeps.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "magma/io.hpp"
#include "magma/problems.hpp"
#include "magma/run_case.hpp"
#include "magma/spectral.hpp"
#include "magma/sweep.hpp"

namespace {

using namespace magma;

constexpr int kExitInputError = 1;
constexpr int kExitNotConverged = 2;

struct RunOptions {
  int n = 16;
  std::string alpha = "0";
  double k_min = 0.5;
  double k_max = 1.5;
  std::string pc = "lu";
  double tol = 1e-8;
  int max_iters = 5000;
  std::optional<int> smoother_apps;
  std::string out;
  std::string vtk;
  std::string history;
};

void add_run_flags(CLI::App* cmd, RunOptions& o, bool mms) {
  cmd->add_option("--n", o.n, "Mesh parameter (cells per side)")->capture_default_str();
  cmd->add_option("--alpha", o.alpha, "Compaction coefficient alpha, fractions allowed")->capture_default_str();
  if (mms) {
    cmd->add_option("--k-min", o.k_min, "Permeability minimum k_*")->capture_default_str();
    cmd->add_option("--k-max", o.k_max, "Permeability maximum k^*")->capture_default_str();
  }
  cmd->add_option("--pc", o.pc, "Preconditioner")->check(CLI::IsMember({"lu", "amg"}, CLI::ignore_case))->capture_default_str();
  cmd->add_option("--tol", o.tol, "Relative true residual tolerance")->capture_default_str();
  cmd->add_option("--max-iters", o.max_iters, "MINRES iteration limit")->capture_default_str();
  cmd->add_option("--smoother-apps", o.smoother_apps, "Velocity AMG smoother applications");
  cmd->add_option("--out", o.out, "Write the result as a CSV row to this file");
  cmd->add_option("--vtk", o.vtk, "Write a legacy VTK file of u, p, k and u_f");
  cmd->add_option("--history", o.history, "Write the residual history as CSV");
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::invalid_argument("cannot open '" + path + "' for writing");
  return f;
}

int do_run(CaseKind kind, const RunOptions& o) {
  CaseConfig c;
  c.kind = kind;
  c.n = o.n;
  c.alpha = parse_real(o.alpha);
  c.k_star = o.k_min;
  c.k_sup = o.k_max;
  c.pc = parse_preconditioner(o.pc);
  c.tol = o.tol;
  c.max_iters = o.max_iters;
  c.smoother_apps = o.smoother_apps;
  validate(c);

  const CaseResult r = run_case(c);
  std::cout << results_csv_header() << '\n' << results_csv_row(r) << '\n';
  if (!o.out.empty()) {
    auto f = open_out(o.out);
    f << results_csv_header() << '\n' << results_csv_row(r) << '\n';
  }
  if (!o.history.empty()) {
    auto f = open_out(o.history);
    write_history_csv(f, r.report);
  }
  if (!o.vtk.empty()) {
    const TaylorHoodSpaces spaces = TaylorHoodSpaces::build(*r.mesh);
    const ScalarField phi = kind == CaseKind::MmsSquare ? constant_field(1.0) : constant_field(0.01);
    write_vtk(o.vtk, *r.mesh, spaces, r.u, r.p, r.k, fluid_velocity(*r.mesh, spaces, r.u, r.p, r.k, phi));
  }
  if (!r.report.converged) {
    std::cerr << "MINRES did not converge in " << r.report.iterations << " iterations (residual "
              << r.report.final_residual() << ")\n";
    return kExitNotConverged;
  }
  return 0;
}

int do_spectra(int n, const std::string& alpha_text, double k_min, double k_max, const std::string& out) {
  const double alpha = parse_real(alpha_text);
  if (n < 1) throw std::invalid_argument("--n must be positive");
  const Mesh mesh = build_unit_square(n);
  const TaylorHoodSpaces spaces = TaylorHoodSpaces::build(mesh);
  const ScalarField k = mms_kfield(k_min, k_max);
  BlockSystem sys = assemble_system(mesh, spaces, alpha, k, {});
  const DirichletCondition bc{BoundaryTag::All, [](const Point&) { return Vec2{}; }};
  sys = apply_dirichlet(std::move(sys), mesh, spaces.velocity, std::span(&bc, 1));
  const BoundsReport report = compute_bounds(mesh, spaces, sys, k_min);
  std::cout << report.text();
  if (!out.empty()) {
    auto f = open_out(out);
    f << BoundsReport::csv_header() << '\n' << report.csv_row() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block-preconditioned MINRES for the simplified two-phase magma dynamics equations"};
  app.require_subcommand(1);

  RunOptions mms_opts, corner_opts, traction_opts;
  auto* mms = app.add_subcommand("mms", "Manufactured solution on the unit square");
  add_run_flags(mms, mms_opts, true);
  auto* corner = app.add_subcommand("wedge-corner", "Subduction wedge with corner-flow inflow data");
  add_run_flags(corner, corner_opts, false);
  auto* traction = app.add_subcommand("wedge-traction", "Subduction wedge with traction-free open boundary");
  add_run_flags(traction, traction_opts, false);

  int spec_n = 8;
  std::string spec_alpha = "0";
  double spec_kmin = 0.0, spec_kmax = 0.0;
  std::string spec_out;
  auto* spectra = app.add_subcommand("spectra", "Measure c1, cP and check the eigenvalue bounds on the unit square");
  spectra->add_option("--n", spec_n, "Mesh parameter")->capture_default_str();
  spectra->add_option("--alpha", spec_alpha, "Compaction coefficient alpha")->capture_default_str();
  spectra->add_option("--k-min", spec_kmin, "Permeability minimum (0 with --k-max 0 gives k = 0)")->capture_default_str();
  spectra->add_option("--k-max", spec_kmax, "Permeability maximum")->capture_default_str();
  spectra->add_option("--out", spec_out, "Write the bounds report as CSV");

  std::string sweep_file, sweep_out;
  auto* sweep = app.add_subcommand("sweep", "Run a parameter grid and emit the results table");
  sweep->add_option("config", sweep_file, "Sweep configuration file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", sweep_out, "CSV output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInputError;
  }

  try {
    if (*mms) return do_run(CaseKind::MmsSquare, mms_opts);
    if (*corner) return do_run(CaseKind::WedgeCorner, corner_opts);
    if (*traction) return do_run(CaseKind::WedgeTraction, traction_opts);
    if (*spectra) return do_spectra(spec_n, spec_alpha, spec_kmin, spec_kmax, spec_out);
    if (*sweep) {
      std::ifstream in(sweep_file);
      const auto configs = parse_sweep(in).expand();
      auto report = [](const CaseResult& r) {
        std::cerr << to_string(r.config.kind) << " n=" << r.config.n << " alpha=" << r.config.alpha << " "
                  << to_string(r.config.pc) << ": " << r.report.iterations << " iterations\n";
      };
      int failures = 0;
      if (sweep_out.empty()) {
        failures = run_sweep(configs, std::cout, report);
      } else {
        auto f = open_out(sweep_out);
        failures = run_sweep(configs, f, report);
      }
      return failures == 0 ? 0 : kExitNotConverged;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return 0;
}
