#include "effaction/problem.hpp"

#include <cmath>
#include <cstdio>

#include "effaction/errors.hpp"

namespace effaction {

namespace {

std::string fmt_x(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

std::vector<std::string> ValidatedProblem::check(const ProblemSpec& spec,
                                                 int probe_points) {
  std::vector<std::string> errors;
  if (spec.mass.empty()) errors.push_back("mass expression missing");
  if (spec.potential.empty()) errors.push_back("potential expression missing");
  if (!(spec.x_lo < spec.x_hi))
    errors.push_back("empty domain: x_lo must be < x_hi");
  if (!(spec.hbar > 0.0)) errors.push_back("hbar must be > 0");
  if (!(spec.kT >= 0.0)) errors.push_back("kT must be >= 0");
  if (probe_points < 2) errors.push_back("probe grid needs at least 2 points");
  if (!errors.empty()) return errors;

  // Dense probing rather than interval arithmetic; adequate at the scales
  // this tool works at, and the density is caller-configurable.
  constexpr int kMaxReports = 3;
  int bad_mass = 0, bad_domain = 0;
  for (int i = 0; i < probe_points; ++i) {
    const double x =
        spec.x_lo + (spec.x_hi - spec.x_lo) * i / double(probe_points - 1);
    try {
      const double m = spec.mass(x);
      if (!(m > 0.0)) {
        if (bad_mass < kMaxReports)
          errors.push_back("non-positive mass at x=" + fmt_x(x));
        ++bad_mass;
      } else if (!std::isfinite(m)) {
        if (bad_mass < kMaxReports)
          errors.push_back("non-finite mass at x=" + fmt_x(x));
        ++bad_mass;
      }
      const double v = spec.potential(x);
      if (!std::isfinite(v)) {
        if (bad_domain < kMaxReports)
          errors.push_back("non-finite potential at x=" + fmt_x(x));
        ++bad_domain;
      }
    } catch (const DomainEvalError& e) {
      if (bad_domain < kMaxReports)
        errors.push_back("expression domain violation at x=" + fmt_x(x) + ": " +
                         e.what());
      ++bad_domain;
    }
  }
  if (bad_mass > kMaxReports)
    errors.push_back("... " + std::to_string(bad_mass) + " probe points with bad mass in total");
  if (bad_domain > kMaxReports)
    errors.push_back("... " + std::to_string(bad_domain) + " probe points with domain violations in total");
  return errors;
}

ValidatedProblem ValidatedProblem::validate(ProblemSpec spec, int probe_points) {
  auto errors = check(spec, probe_points);
  if (!errors.empty()) throw ValidationError(std::move(errors));
  return ValidatedProblem(std::move(spec));
}

ValidatedProblem ValidatedProblem::with_hbar(double hbar) const {
  ProblemSpec s = spec_;
  s.hbar = hbar;
  if (!(hbar > 0.0)) throw ValidationError({"hbar must be > 0"});
  return ValidatedProblem(std::move(s));
}

ValidatedProblem ValidatedProblem::with_kT(double kT) const {
  ProblemSpec s = spec_;
  s.kT = kT;
  if (!(kT >= 0.0)) throw ValidationError({"kT must be >= 0"});
  return ValidatedProblem(std::move(s));
}

}  // namespace effaction
