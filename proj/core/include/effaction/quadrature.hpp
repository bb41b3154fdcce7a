#pragma once

#include <functional>
#include <vector>

namespace effaction {

/// Nodes and weights for Gauss-Hermite quadrature with weight exp(-t^2):
/// integral exp(-t^2) f(t) dt = sum w_i f(t_i), exact for polynomials of
/// degree <= 2n-1.  Rules are computed once per order and cached.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  static const GaussHermiteRule& of_order(int n);
};

/// Adaptive Gauss-Kronrod (7,15) on a finite interval.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double rel_tol = 1e-11,
                          double abs_tol = 1e-300, int max_depth = 48);

/// Integral over [0, +inf) via the tangent substitution t = scale*tan(u);
/// `scale` should match the natural scale of the integrand's falloff.
double integrate_half_line(const std::function<double(double)>& f,
                           double scale, double rel_tol = 1e-11);

}  // namespace effaction
