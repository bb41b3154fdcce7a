#include "effaction/effective.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "effaction/errors.hpp"
#include "effaction/quadrature.hpp"

namespace effaction {

namespace {

struct Local {
  double m, m1, m2;       // mass and its first two derivatives
  double v2, v3, v4;      // potential curvature and higher derivatives
};

Local fetch(const ValidatedProblem& p, double x) {
  const Jet4 mj = p.mass_jet(x);
  const Jet4 vj = p.potential_jet(x);
  return {mj.d[0], mj.d[1], mj.d[2], vj.d[2], vj.d[3], vj.d[4]};
}

double require_stable(const Local& c, double x) {
  if (!(c.v2 > 0.0)) throw InstabilityError(x, c.v2);
  return c.v2;
}

}  // namespace

double local_frequency(const ValidatedProblem& p, double x) {
  const Local c = fetch(p, x);
  require_stable(c, x);
  return std::sqrt(c.v2 / c.m);
}

double one_loop_potential(const ValidatedProblem& p, double x) {
  return 0.5 * p.hbar() * local_frequency(p, x);
}

double one_loop_gradient(const ValidatedProblem& p, double x) {
  const Local c = fetch(p, x);
  require_stable(c, x);
  const double sv = std::sqrt(c.v2);
  return -0.25 * p.hbar() *
         (c.m1 * sv / (c.m * std::sqrt(c.m)) - c.v3 / std::sqrt(c.m * c.v2));
}

double kinetic_correction_at_frequency(const ValidatedProblem& p, double x,
                                       double freq) {
  if (!(freq > 0.0)) throw Error("kinetic correction needs a positive frequency");
  const Local c = fetch(p, x);
  const double m = c.m, m2sq = m * m;
  const double w = freq, w3 = w * w * w, w5 = w3 * w * w;
  return p.hbar() * (c.v3 * c.v3 / (32 * m2sq * w5)
                     - 5 * c.m1 * c.v3 / (16 * m2sq * w3)
                     - 11 * c.m1 * c.m1 / (32 * m2sq * w)
                     + c.m2 / (4 * m * w));
}

double kinetic_correction(const ValidatedProblem& p, double x) {
  return kinetic_correction_at_frequency(p, x, local_frequency(p, x));
}

double effective_mass(const ValidatedProblem& p, double x, MassForm form) {
  const Local c = fetch(p, x);
  require_stable(c, x);
  if (form == MassForm::vm) return c.m + kinetic_correction(p, x);
  const double w = std::sqrt(c.v2 / c.m);
  const double w1 = (c.v3 * c.m - c.v2 * c.m1) / (2 * c.m * c.m * w);
  return c.m + p.hbar() * (w1 * w1 / (16 * w * w * w)
                           - (w1 / w) * (c.m1 / c.m) / 4
                           - 5 * c.m1 * c.m1 / (16 * w * c.m * c.m)
                           + c.m2 / (8 * w * c.m));
}

double mass_form_residual(const ValidatedProblem& p, double x) {
  return effective_mass(p, x, MassForm::vm) -
         effective_mass(p, x, MassForm::omega_form);
}

LocalCoefficients local_coefficients(const ValidatedProblem& p, double x) {
  LocalCoefficients c;
  c.x = x;
  c.omega = local_frequency(p, x);
  c.v1 = 0.5 * p.hbar() * c.omega;
  c.z = kinetic_correction_at_frequency(p, x, c.omega);
  c.m_eff_vm = p.mass(x) + c.z;
  c.m_eff_omega = effective_mass(p, x, MassForm::omega_form);
  return c;
}

namespace {

// Heat-kernel action on a coefficient vector: sum_j (a2/2)^j p^(2j) / j!.
double smear_polynomial(const std::vector<double>& coeffs, double x, double a2) {
  std::vector<double> c = coeffs;
  double result = 0.0;
  double factor = 1.0;  // (a2/2)^j / j!
  for (int j = 0;; ++j) {
    double value = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) value = value * x + c[k];
    result += factor * value;
    if (c.size() <= 2) break;
    // Differentiate twice.
    std::vector<double> dd(c.size() - 2);
    for (std::size_t k = 2; k < c.size(); ++k)
      dd[k - 2] = c[k] * double(k) * double(k - 1);
    c = std::move(dd);
    factor *= 0.5 * a2 / (j + 1);
  }
  return result;
}

std::vector<double> differentiate_twice(std::vector<double> c) {
  if (c.size() <= 2) return {0.0};
  std::vector<double> dd(c.size() - 2);
  for (std::size_t k = 2; k < c.size(); ++k)
    dd[k - 2] = c[k] * double(k) * double(k - 1);
  return dd;
}

template <typename F>
double smear_quadrature(F&& f, double x, double a2, const SmearOptions& opts) {
  const double step = std::sqrt(2.0 * a2);
  auto estimate = [&](int order) {
    const auto& rule = GaussHermiteRule::of_order(order);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      sum += rule.weights[i] * f(x + step * rule.nodes[i]);
    return sum / std::sqrt(std::numbers::pi);
  };
  const double coarse = estimate(opts.quadrature_order);
  const double fine = estimate(2 * opts.quadrature_order);
  if (!(std::abs(fine - coarse) <= opts.abs_tol) || !std::isfinite(fine))
    throw QuadratureError("smearing quadrature did not converge", coarse, fine);
  return fine;
}

}  // namespace

double smear_potential(const ValidatedProblem& p, double x, double a2,
                       const SmearOptions& opts) {
  if (a2 < 0.0) throw Error("smearing width a2 must be >= 0");
  if (a2 == 0.0) return p.potential(x);
  if (!opts.force_quadrature) {
    if (const auto* poly = p.potential_expr().polynomial())
      return smear_polynomial(*poly, x, a2);
  }
  return smear_quadrature([&](double t) { return p.potential(t); }, x, a2, opts);
}

double smeared_curvature(const ValidatedProblem& p, double x, double a2,
                         const SmearOptions& opts) {
  if (a2 < 0.0) throw Error("smearing width a2 must be >= 0");
  if (a2 == 0.0) return p.potential_jet(x).d[2];
  if (!opts.force_quadrature) {
    if (const auto* poly = p.potential_expr().polynomial())
      return smear_polynomial(differentiate_twice(*poly), x, a2);
  }
  return smear_quadrature([&](double t) { return p.potential_jet(t).d[2]; }, x,
                          a2, opts);
}

double quantum_width(const ValidatedProblem& p, double x, double Omega) {
  if (!(Omega > 0.0)) throw Error("width needs Omega > 0");
  return p.hbar() / (2.0 * p.mass(x) * Omega);
}

double thermal_width(const ValidatedProblem& p, double x, double Omega,
                     double kT) {
  if (!(Omega > 0.0)) throw Error("width needs Omega > 0");
  if (kT < 0.0) throw Error("width needs kT >= 0");
  if (kT == 0.0) return quantum_width(p, x, Omega);
  const double m = p.mass(x);
  const double u = p.hbar() * Omega / (2.0 * kT);
  const double prefactor = kT / (m * Omega * Omega);
  if (u < 1e-4) {
    // u coth u - 1 = u^2/3 - u^4/45 + 2 u^6/945 - ...
    const double u2 = u * u;
    return prefactor * u2 * (1.0 / 3 + u2 * (-1.0 / 45 + u2 * (2.0 / 945)));
  }
  return prefactor * (u / std::tanh(u) - 1.0);
}

}  // namespace effaction
