#pragma once

#include "effaction/problem.hpp"

namespace effaction {

/// Which effective-mass assembly to use.  `vm` is m(x) plus the kinetic
/// correction and is the canonical choice fed to the dynamics; the
/// frequency form is kept as a diagnostic because the two disagree by a
/// factor of two in their correction terms (see mass_form_residual).
enum class MassForm { vm, omega_form };

/// Local harmonic frequency sqrt(V''(x)/m(x)).
/// Throws InstabilityError when V''(x) <= 0.
double local_frequency(const ValidatedProblem& p, double x);

/// Leading quantum correction to the potential, (hbar/2) sqrt(V''/m).
double one_loop_potential(const ValidatedProblem& p, double x);

/// Analytic x-derivative of the one-loop potential:
/// -(hbar/4) [ m' sqrt(V'') / m^(3/2) - V''' / sqrt(m V'') ].
double one_loop_gradient(const ValidatedProblem& p, double x);

/// Kinetic-energy correction Z(x), the coefficient of xdot^2/2 in the
/// corrected Lagrangian:
///   Z = hbar [ V'''^2 sqrt(m) / (32 V''^(5/2))
///            - 5 m' V''' / (16 sqrt(m) V''^(3/2))
///            - 11 m'^2 / (32 m^(3/2) sqrt(V''))
///            + m'' / (4 sqrt(m V'')) ].
double kinetic_correction(const ValidatedProblem& p, double x);

/// Z(x) with every occurrence of the local frequency replaced by `freq`
/// (used when substituting the solved trial frequency).
double kinetic_correction_at_frequency(const ValidatedProblem& p, double x,
                                       double freq);

double effective_mass(const ValidatedProblem& p, double x, MassForm form);

/// effective_mass(vm) - effective_mass(omega_form); zero for harmonic
/// constant-mass problems, and a direct numerical probe of the factor-two
/// tension between the two published correction forms.
double mass_form_residual(const ValidatedProblem& p, double x);

/// Everything the derivative expansion yields at one stable point.
/// m_eff_vm == m(x) + z by construction.
struct LocalCoefficients {
  double x = 0.0;
  double omega = 0.0;       // local frequency
  double v1 = 0.0;          // one-loop potential correction
  double z = 0.0;           // kinetic correction
  double m_eff_vm = 0.0;
  double m_eff_omega = 0.0;
};
LocalCoefficients local_coefficients(const ValidatedProblem& p, double x);

struct SmearOptions {
  int quadrature_order = 64;   // doubled once for the convergence check
  double abs_tol = 1e-9;       // allowed difference between the two orders
  bool force_quadrature = false;  // skip the closed-form polynomial path
};

/// Gaussian smearing of the full potential:
///   V_{a2}(x) = integral N(x'; x, a2) V(x') dx'.
/// a2 = 0 returns V(x) exactly.  Polynomial potentials use the exact
/// heat-kernel expansion V_{a2} = sum_j (a2/2)^j V^(2j) / j!; everything
/// else goes through Gauss-Hermite quadrature with an order-doubling
/// convergence check (QuadratureError on disagreement).
double smear_potential(const ValidatedProblem& p, double x, double a2,
                       const SmearOptions& opts = {});

/// d^2/dx^2 of the smeared potential at fixed a2, i.e. the smearing of V''.
double smeared_curvature(const ValidatedProblem& p, double x, double a2,
                         const SmearOptions& opts = {});

/// Zero-temperature fluctuation width hbar / (2 m(x) Omega).
double quantum_width(const ValidatedProblem& p, double x, double Omega);

/// Finite-temperature fluctuation width
///   a2 = kT/(m Omega^2) [ u coth u - 1 ],  u = hbar Omega / (2 kT),
/// evaluated by series for u < 1e-4 to dodge the cancellation; kT = 0
/// falls back to quantum_width.
double thermal_width(const ValidatedProblem& p, double x, double Omega,
                     double kT);

}  // namespace effaction
