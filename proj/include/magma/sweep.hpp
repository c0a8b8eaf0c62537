#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "magma/run_case.hpp"

namespace magma {

/// Parameter grid read from a plain-text file of `key = value value ...`
/// lines; `#` starts a comment. Keys: case, n, alpha, k_star, k_sup, pc,
/// tol, max_iters, smoother_apps. Multi-valued keys expand to their
/// Cartesian product in the order case, pc, smoother_apps, k_sup, k_star,
/// alpha, n (n
/// varies fastest). Numbers may be written as fractions such as -1/3.
struct SweepGrid {
  std::vector<CaseKind> cases{CaseKind::MmsSquare};
  std::vector<int> n{16};
  std::vector<double> alpha{0.0};
  std::vector<double> k_star{0.5};
  std::vector<double> k_sup{1.5};
  std::vector<PreconditionerKind> pc{PreconditionerKind::Exact};
  double tol = 1e-8;
  int max_iters = 5000;
  std::vector<int> smoother_apps;  // empty: defaults

  std::vector<CaseConfig> expand() const;
};

/// Throws std::invalid_argument with the offending line number.
SweepGrid parse_sweep(std::istream& in);

/// Parses a real number, accepting a single fraction `a/b`.
double parse_real(const std::string& text);

/// Runs every configuration, writing the CSV header and one row per run.
/// `progress`, when set, is called after each run. Returns the number of
/// runs that did not converge.
int run_sweep(const std::vector<CaseConfig>& configs, std::ostream& csv,
              const std::function<void(const CaseResult&)>& progress = {});

}  // namespace magma
