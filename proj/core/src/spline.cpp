#include "effaction/spline.hpp"

#include <algorithm>
#include <cmath>

#include "effaction/errors.hpp"

namespace effaction {

CubicSpline::CubicSpline(double x0, double dx, std::span<const double> y)
    : x0_(x0), dx_(dx), y_(y.begin(), y.end()) {
  const std::size_t n = y_.size();
  if (n < 4) throw Error("cubic spline needs at least 4 points");
  if (!(dx > 0.0)) throw Error("cubic spline needs dx > 0");

  // Second-derivative system sigma_{i-1} + 4 sigma_i + sigma_{i+1} = r_i,
  // r_i = 6 (y_{i-1} - 2 y_i + y_{i+1}) / dx^2.  The not-a-knot conditions
  // (continuous third derivative at the first and last interior node) give
  // sigma_1 and sigma_{n-2} in closed form, after which the interior block
  // is an ordinary tridiagonal solve.
  sigma_.assign(n, 0.0);
  auto r = [&](std::size_t i) {
    return 6.0 * (y_[i - 1] - 2.0 * y_[i] + y_[i + 1]) / (dx * dx);
  };
  sigma_[1] = r(1) / 6.0;
  sigma_[n - 2] = r(n - 2) / 6.0;

  if (n > 4) {
    const std::size_t m = n - 4;  // unknowns sigma_2 .. sigma_{n-3}
    std::vector<double> diag(m, 4.0), rhs(m);
    for (std::size_t k = 0; k < m; ++k) rhs[k] = r(k + 2);
    rhs[0] -= sigma_[1];
    rhs[m - 1] -= sigma_[n - 2];
    // Thomas elimination with constant off-diagonals of 1.
    for (std::size_t k = 1; k < m; ++k) {
      const double w = 1.0 / diag[k - 1];
      diag[k] -= w;
      rhs[k] -= w * rhs[k - 1];
    }
    for (std::size_t k = m; k-- > 0;) {
      const double upper = (k + 1 < m) ? rhs[k + 1] : 0.0;
      rhs[k] = (rhs[k] - upper) / diag[k];
    }
    for (std::size_t k = 0; k < m; ++k) sigma_[k + 2] = rhs[k];
  }

  sigma_[0] = 2.0 * sigma_[1] - sigma_[2];
  sigma_[n - 1] = 2.0 * sigma_[n - 2] - sigma_[n - 3];
}

double CubicSpline::operator()(double x) const {
  const std::size_t n = y_.size();
  const double s = (x - x0_) / dx_;
  std::size_t i = static_cast<std::size_t>(std::clamp(
      std::floor(s), 0.0, double(n - 2)));
  const double u = x - (x0_ + dx_ * double(i));
  const double h = dx_;
  const double slope = (y_[i + 1] - y_[i]) / h - h * (2.0 * sigma_[i] + sigma_[i + 1]) / 6.0;
  return y_[i] + u * (slope + u * (sigma_[i] / 2.0 + u * (sigma_[i + 1] - sigma_[i]) / (6.0 * h)));
}

double CubicSpline::derivative(double x) const {
  const std::size_t n = y_.size();
  const double s = (x - x0_) / dx_;
  std::size_t i = static_cast<std::size_t>(std::clamp(
      std::floor(s), 0.0, double(n - 2)));
  const double u = x - (x0_ + dx_ * double(i));
  const double h = dx_;
  const double slope = (y_[i + 1] - y_[i]) / h - h * (2.0 * sigma_[i] + sigma_[i + 1]) / 6.0;
  return slope + u * (sigma_[i] + u * (sigma_[i + 1] - sigma_[i]) / (2.0 * h));
}

}  // namespace effaction
