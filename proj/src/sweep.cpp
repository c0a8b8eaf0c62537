#include "magma/sweep.hpp"

#include <istream>
#include <set>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "magma/io.hpp"

namespace magma {

double parse_real(const std::string& text) {
  auto whole = [&text](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("not a number: '" + text + "'");
    }
    if (used != s.size()) throw std::invalid_argument("not a number: '" + text + "'");
    return v;
  };
  const auto slash = text.find('/');
  if (slash == std::string::npos) return whole(text);
  const double den = whole(text.substr(slash + 1));
  if (den == 0.0) throw std::invalid_argument("zero denominator in '" + text + "'");
  return whole(text.substr(0, slash)) / den;
}

namespace {

int parse_int(const std::string& text) {
  const double v = parse_real(text);
  if (v != static_cast<double>(static_cast<int>(v))) throw std::invalid_argument("not an integer: '" + text + "'");
  return static_cast<int>(v);
}

}  // namespace

SweepGrid parse_sweep(std::istream& in) {
  SweepGrid grid;
  std::string line;
  int lineno = 0;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    std::istringstream keys(line.substr(0, eq == std::string::npos ? line.size() : eq));
    std::string key, extra;
    if (!(keys >> key)) continue;
    auto fail = [&](const std::string& what) {
      throw std::invalid_argument("sweep config line " + std::to_string(lineno) + ": " + what);
    };
    if (eq == std::string::npos || (keys >> extra)) fail("expected 'key = values'");
    std::istringstream rest(line.substr(eq + 1));
    std::vector<std::string> values;
    for (std::string v; rest >> v;) values.push_back(v);
    if (values.empty()) fail("no values for '" + key + "'");
    if (!seen.insert(key).second) fail("duplicate key '" + key + "'");
    try {
      auto reals = [&] {
        std::vector<double> out;
        for (const auto& v : values) out.push_back(parse_real(v));
        return out;
      };
      auto ints = [&] {
        std::vector<int> out;
        for (const auto& v : values) out.push_back(parse_int(v));
        return out;
      };
      if (key == "case") {
        grid.cases.clear();
        for (const auto& v : values) grid.cases.push_back(parse_case_kind(v));
      } else if (key == "n") {
        grid.n = ints();
      } else if (key == "alpha") {
        grid.alpha = reals();
      } else if (key == "k_star") {
        grid.k_star = reals();
      } else if (key == "k_sup") {
        grid.k_sup = reals();
      } else if (key == "pc") {
        grid.pc.clear();
        for (const auto& v : values) grid.pc.push_back(parse_preconditioner(v));
      } else if (key == "tol" || key == "max_iters") {
        if (values.size() != 1) fail("'" + key + "' takes a single value");
        if (key == "tol") grid.tol = parse_real(values[0]);
        else grid.max_iters = parse_int(values[0]);
      } else if (key == "smoother_apps") {
        grid.smoother_apps = ints();
      } else {
        fail("unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument& e) {
      const std::string msg = e.what();
      if (msg.rfind("sweep config", 0) == 0) throw;
      fail(msg);
    }
  }
  return grid;
}

std::vector<CaseConfig> SweepGrid::expand() const {
  std::vector<CaseConfig> out;
  const std::vector<int> apps = smoother_apps.empty() ? std::vector<int>{0} : smoother_apps;
  for (CaseKind kind : cases) {
    const bool mms = kind == CaseKind::MmsSquare;
    // k ranges only matter for the manufactured case.
    const std::vector<double> ksups = mms ? k_sup : std::vector<double>{k_sup.front()};
    const std::vector<double> kstars = mms ? k_star : std::vector<double>{k_star.front()};
    for (PreconditionerKind p : pc) {
      for (int a : apps) {
        for (double ks : ksups) {
          for (double kl : kstars) {
            for (double al : alpha) {
              for (int nn : n) {
                CaseConfig c;
                c.kind = kind;
                c.n = nn;
                c.alpha = al;
                c.k_star = kl;
                c.k_sup = ks;
                c.pc = p;
                c.tol = tol;
                c.max_iters = max_iters;
                if (a > 0) c.smoother_apps = a;
                validate(c);
                out.push_back(c);
              }
            }
          }
        }
      }
    }
  }
  return out;
}

int run_sweep(const std::vector<CaseConfig>& configs, std::ostream& csv,
              const std::function<void(const CaseResult&)>& progress) {
  int failures = 0;
  csv << results_csv_header() << '\n';
  for (const auto& c : configs) {
    const CaseResult r = run_case(c);
    failures += !r.report.converged;
    csv << results_csv_row(r) << '\n' << std::flush;
    if (progress) progress(r);
  }
  return failures;
}

}  // namespace magma
