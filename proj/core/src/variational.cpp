#include "effaction/variational.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "effaction/errors.hpp"

namespace effaction {

const char* method_name(SolverReport::Method m) {
  return m == SolverReport::Method::damped_iteration ? "damped-iteration"
                                                     : "bracketed-root";
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// F(s): smeared curvature over m at the width belonging to Omega = sqrt(s).
// The x-differentiation happens before the a2 substitution, matching the
// bracket convention of the self-consistency equation.
struct CurvatureMap {
  const ValidatedProblem& p;
  double x;
  double kT;
  const SolverOptions& opts;
  double m;

  double operator()(double s) const {
    const double Omega = std::sqrt(s);
    const double a2 = thermal_width(p, x, Omega, kT);
    return smeared_curvature(p, x, a2, opts.smear) / m;
  }
};

std::optional<double> try_eval(const CurvatureMap& F, double s) {
  try {
    const double v = F(s);
    return std::isfinite(v) ? std::optional<double>(v) : std::nullopt;
  } catch (const Error&) {
    return std::nullopt;
  }
}

// Expands geometrically around the seed looking for a sign change of
// g(s) = s - F(s), then bisects with a secant acceleration.
double bracketed_root(const CurvatureMap& F, double seed, double rel_tol,
                      SolverReport& report) {
  struct Sample {
    double s, g;
  };
  std::optional<Sample> prev;
  std::optional<std::pair<Sample, Sample>> bracket;
  for (int k = -60; k <= 60; ++k) {
    const double s = seed * std::exp2(double(k));
    if (!(s > 0.0) || !std::isfinite(s)) continue;
    const auto f = try_eval(F, s);
    if (!f) {
      prev.reset();  // a gap in evaluability breaks the sign chain
      continue;
    }
    const Sample cur{s, s - *f};
    if (prev && prev->g * cur.g <= 0.0) {
      bracket = {*prev, cur};
      if (cur.s >= seed) break;  // keep the bracket nearest the seed from below
    }
    prev = cur;
  }
  if (!bracket)
    throw NoFixedPointError(
        "no positive fixed point: g(s) = s - F(s) has no sign change over the "
        "searched bracket");

  auto [lo, hi] = *bracket;
  for (int iter = 0; iter < 200; ++iter) {
    ++report.iterations;
    // Secant proposal clipped into the bracket, else plain bisection.
    double s_next = 0.5 * (lo.s + hi.s);
    const double denom = hi.g - lo.g;
    if (denom != 0.0) {
      const double secant = lo.s - lo.g * (hi.s - lo.s) / denom;
      if (secant > lo.s && secant < hi.s) s_next = secant;
    }
    const auto f = try_eval(F, s_next);
    if (!f) throw NoFixedPointError("fixed-point map not evaluable inside the bracket");
    const Sample mid{s_next, s_next - *f};
    const double residual = std::abs(mid.g) / std::max(mid.s, 1e-300);
    if (residual <= rel_tol) {
      report.final_residual = residual;
      report.converged = true;
      return mid.s;
    }
    if (lo.g * mid.g <= 0.0)
      hi = mid;
    else
      lo = mid;
    if (hi.s - lo.s <= rel_tol * hi.s) {
      const double s = 0.5 * (lo.s + hi.s);
      const auto fs = try_eval(F, s);
      report.final_residual = fs ? std::abs(s - *fs) / s : kNaN;
      report.converged = report.final_residual <= 8 * rel_tol;
      return s;
    }
  }
  report.converged = false;
  throw Error("non-convergent: bracketed root search exhausted its iterations");
}

}  // namespace

SelfConsistentPoint solve_trial_frequency(const ValidatedProblem& p, double x,
                                          double kT, const SolverOptions& opts) {
  if (!p.contains(x)) throw Error("solve point outside the problem domain");
  if (kT < 0.0) throw Error("kT must be >= 0");

  CurvatureMap F{p, x, kT, opts, p.mass(x)};

  const double vpp = p.potential_jet(x).d[2];
  double seed = std::abs(vpp) / F.m;
  if (!(seed > 1e-16)) seed = 1e-8;  // degenerate V''=0: start from a floor

  SolverReport report;
  double s = seed;
  double prev_residual = std::numeric_limits<double>::infinity();
  int worsened = 0;

  for (; report.iterations < opts.max_iter; ++report.iterations) {
    const auto f = try_eval(F, s);
    if (!f || !(s > 0.0)) break;  // escaped the evaluable region
    const double residual = std::abs(*f - s) / std::max(s, 1e-300);
    if (residual <= opts.rel_tol) {
      report.final_residual = residual;
      report.converged = true;
      break;
    }
    // Oscillation guard: hand over once the residual stops improving.
    worsened = residual >= prev_residual ? worsened + 1 : 0;
    if (worsened >= 8) break;
    prev_residual = residual;
    s = (1.0 - opts.damping) * s + opts.damping * *f;
  }

  if (!report.converged) {
    // Stalled, oscillated, left s > 0, or ran out of iterations.
    report = SolverReport{};
    report.method = SolverReport::Method::bracketed_root;
    s = bracketed_root(F, seed, opts.rel_tol, report);
  }

  SelfConsistentPoint pt;
  pt.x = x;
  pt.Omega = std::sqrt(s);
  pt.a2 = thermal_width(p, x, pt.Omega, kT);
  pt.report = report;
  const double m = F.m;
  pt.W = 0.5 * p.hbar() * pt.Omega - 0.5 * m * s * pt.a2 +
         smear_potential(p, x, pt.a2, opts.smear);
  return pt;
}

double variational_potential(const ValidatedProblem& p, double x, double kT) {
  return solve_trial_frequency(p, x, kT).W;
}

std::size_t EffectiveTable::valid_count() const {
  std::size_t n = 0;
  for (auto f : valid) n += f;
  return n;
}

EffectiveTable tabulate_effective(const ValidatedProblem& p, int grid_points,
                                  double kT, const SolverOptions& opts) {
  if (grid_points < 2) throw Error("tabulation needs at least 2 grid points");
  EffectiveTable t;
  t.kT = kT;
  const int n = grid_points;
  t.x.resize(n);
  t.omega.assign(n, kNaN);
  t.Omega.assign(n, kNaN);
  t.a2.assign(n, kNaN);
  t.V.assign(n, kNaN);
  t.W.assign(n, kNaN);
  t.m_eff.assign(n, kNaN);
  t.valid.assign(n, 0);
  t.reports.resize(n);

  for (int i = 0; i < n; ++i) {
    const double x = p.x_lo() + (p.x_hi() - p.x_lo()) * i / double(n - 1);
    t.x[i] = x;
    t.V[i] = p.potential(x);
    try {
      t.omega[i] = local_frequency(p, x);
    } catch (const InstabilityError&) {
      // stays NaN; the point may still solve through the smeared curvature
    }
    try {
      SelfConsistentPoint pt = solve_trial_frequency(p, x, kT, opts);
      t.Omega[i] = pt.Omega;
      t.a2[i] = pt.a2;
      t.W[i] = pt.W;
      t.m_eff[i] = p.mass(x) + kinetic_correction_at_frequency(p, x, pt.Omega);
      t.reports[i] = pt.report;
      t.valid[i] = 1;
    } catch (const Error&) {
      t.valid[i] = 0;
    }
  }

  if (t.valid_count() == 0)
    throw Error("tabulation failed: no grid point is solvable");
  return t;
}

}  // namespace effaction
