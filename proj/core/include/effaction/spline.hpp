#pragma once

#include <span>
#include <vector>

namespace effaction {

/// Cubic interpolant on a uniform grid with not-a-knot end conditions, so
/// data sampled from any cubic (in particular harmonic tables) reproduces
/// it exactly, endpoints included.
class CubicSpline {
 public:
  CubicSpline() = default;

  /// Needs at least 4 points; `x0` and `dx` define the uniform abscissae.
  CubicSpline(double x0, double dx, std::span<const double> y);

  double operator()(double x) const;
  double derivative(double x) const;

  double x_min() const { return x0_; }
  double x_max() const { return x0_ + dx_ * double(y_.size() - 1); }
  bool covers(double x) const { return x >= x_min() && x <= x_max(); }

 private:
  double x0_ = 0.0, dx_ = 1.0;
  std::vector<double> y_;
  std::vector<double> sigma_;  // second derivatives at the nodes
};

}  // namespace effaction
