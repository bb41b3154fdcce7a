#pragma once

#include <vector>

#include "effaction/problem.hpp"

namespace effaction {

/// Output of the finite-difference Schroedinger eigensolver at one
/// resolution.
struct GridSpectrum {
  int grid_size = 0;          // interior points
  double spacing = 0.0;
  std::vector<double> eigenvalues;  // ascending
  double convergence_estimate = 0.0;  // change under the last doubling
};

struct GroundStateOptions {
  double tol = 1e-8;        // absolute convergence target under doubling
  double eigen_tol = 1e-10; // absolute bisection tolerance per grid solve
  int max_grid = 1 << 19;   // refuse to refine beyond this many points
  bool widen_check = true;  // re-solve on a widened box and compare
  /// Position-dependent mass has no canonical quantization; the default is
  /// to reject it.  Setting this evaluates the symmetric ordering
  /// -(hbar^2/2) d/dx (1/m(x)) d/dx instead -- useful for exploratory
  /// comparisons, but it is not the ordering the rest of the library is
  /// derived from.
  bool symmetric_mass_ordering = false;
};

/// The `count` lowest Dirichlet eigenvalues on [x_lo, x_hi] with n interior
/// points, at a single resolution.
GridSpectrum grid_spectrum(const ValidatedProblem& p, double x_lo, double x_hi,
                           int n, int count,
                           const GroundStateOptions& opts = {});

/// Lowest eigenvalue, with the grid doubled until the h^2-extrapolated
/// value (Richardson over successive doublings) changes by less than
/// opts.tol; eigenvalues[0] is that converged estimate and grid_size the
/// finest grid used.  Requires constant mass unless the symmetric-ordering
/// flag is set; checks that widening the box once does not move the result
/// (tails must be negligible).
GridSpectrum ground_state_energy(const ValidatedProblem& p, double x_lo,
                                 double x_hi, int n,
                                 const GroundStateOptions& opts = {});

/// Euclidean frequency integral
///   I(p,q) = integral dnu/(2 pi) nu^p / (m nu^2 + v2)^q
/// by adaptive quadrature, together with the closed form
///   Gamma(q-(p+1)/2) Gamma((p+1)/2) / (2 pi v2^(q-(p+1)/2) m^((p+1)/2) Gamma(q)).
/// Odd p returns exact zeros; 2q - p <= 1 (divergent) is rejected.
struct FrequencyIntegral {
  double quadrature = 0.0;
  double closed_form = 0.0;
  double relative_error() const;
};
FrequencyIntegral frequency_integral(int p_exp, int q_exp, double m, double v2);

/// Relative residual between the analytic d(one-loop potential)/dV'' and
/// (hbar/2) times the quadrature value of I(0,1,m,V''); both equal
/// hbar / (4 sqrt(m V'')).
double one_loop_slope_residual(const ValidatedProblem& p, double x);

struct ZProbeOptions {
  double eps_rel = 1e-3;  // oscillation amplitude in units of the local width
  double nu = 0.0;        // largest probe frequency; 0 means omega(x0)/20
  int n_steps = 2048;     // lattice steps over the shortest probe period
  int fit_points = 5;     // probe frequencies nu/j, j = 1..fit_points
  double max_condition = 1e8;
};

struct ZProbeResult {
  double z_estimate = 0.0;       // kinetic coefficient from the nu^2 fit
  double fit_intercept = 0.0;    // leftover static piece (should be ~0)
  double fit_condition = 0.0;    // condition number of the scaled normal matrix
  double v_static = 0.0;         // one-loop potential from the eps=0 determinant
  double v_static_rel_error = 0.0;  // against the analytic one-loop potential
  double eps = 0.0;              // absolute amplitude used
  std::vector<double> nus;       // probe frequencies
};

/// Estimates the kinetic coefficient Z(x0) from lattice log-determinants of
/// the Euclidean second-variation operator around the periodic background
/// X(tau) = x0 + eps sin(nu tau):
///
///   Gamma_1 = (hbar/2) [ log det K - sum_i log(m_{i+1/2}/h) ]
///
/// (the subtraction is the variable-mass slicing measure).  Per unit
/// Euclidean time Gamma_1 carries V(X) averaged over the orbit plus
/// Z(x0)/2 <Xdot^2> = Z(x0) eps^2 nu^2 / 4; after removing the static
/// average analytically the nu^2 slope of a fit across several frequencies
/// yields Z.  The Euclidean coefficient is continued to the kinetic
/// correction with unit factor; a disagreement in sign would show up as a
/// negative estimate, never silently.
ZProbeResult fluctuation_determinant_z_probe(const ValidatedProblem& p,
                                             double x0,
                                             const ZProbeOptions& opts = {});

}  // namespace effaction
