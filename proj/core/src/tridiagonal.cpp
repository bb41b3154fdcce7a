#include "effaction/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "effaction/errors.hpp"

namespace effaction {

int sturm_count_below(std::span<const double> diag,
                      std::span<const double> offdiag, double lambda) {
  const std::size_t n = diag.size();
  int count = 0;
  double d = 1.0;
  // Classic shifted LDL recurrence; the tiny floor keeps the recurrence
  // alive when a pivot lands exactly on zero.
  const double tiny = std::numeric_limits<double>::min();
  for (std::size_t i = 0; i < n; ++i) {
    const double b2 = i == 0 ? 0.0 : offdiag[i - 1] * offdiag[i - 1];
    d = (diag[i] - lambda) - b2 / d;
    if (d == 0.0) d = tiny;
    if (d < 0.0) ++count;
  }
  return count;
}

namespace {

std::pair<double, double> gershgorin_bounds(std::span<const double> diag,
                                            std::span<const double> offdiag) {
  const std::size_t n = diag.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(offdiag[i - 1]);
    if (i + 1 < n) r += std::abs(offdiag[i]);
    lo = std::min(lo, diag[i] - r);
    hi = std::max(hi, diag[i] + r);
  }
  return {lo, hi};
}

}  // namespace

double tridiagonal_eigenvalue(std::span<const double> diag,
                              std::span<const double> offdiag, int k,
                              double tol) {
  auto [lo, hi] = gershgorin_bounds(diag, offdiag);
  const double scale = std::max(std::abs(lo), std::abs(hi));
  if (tol <= 0.0) tol = 1e-14 * std::max(1.0, scale);
  while (hi - lo > tol + 4 * std::numeric_limits<double>::epsilon() * scale) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count_below(diag, offdiag, mid) > k)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> tridiagonal_eigenvalues(std::span<const double> diag,
                                            std::span<const double> offdiag,
                                            int count, double tol) {
  std::vector<double> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k)
    out.push_back(tridiagonal_eigenvalue(diag, offdiag, k, tol));
  return out;
}

void spd_tridiagonal_solve(std::span<const double> diag,
                           std::span<const double> offdiag,
                           std::span<double> rhs) {
  const std::size_t n = diag.size();
  std::vector<double> d(n), l(n > 0 ? n - 1 : 0);
  d[0] = diag[0];
  if (!(d[0] > 0.0)) throw Error("tridiagonal solve: matrix not positive definite");
  for (std::size_t i = 1; i < n; ++i) {
    l[i - 1] = offdiag[i - 1] / d[i - 1];
    d[i] = diag[i] - l[i - 1] * offdiag[i - 1];
    if (!(d[i] > 0.0)) throw Error("tridiagonal solve: matrix not positive definite");
  }
  for (std::size_t i = 1; i < n; ++i) rhs[i] -= l[i - 1] * rhs[i - 1];
  for (std::size_t i = 0; i < n; ++i) rhs[i] /= d[i];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= l[i] * rhs[i + 1];
}

double cyclic_spd_tridiagonal_logdet(std::span<const double> diag,
                                     std::span<const double> offdiag,
                                     double corner) {
  const std::size_t n = diag.size();
  if (n < 3) throw Error("cyclic logdet: need at least 3 rows");
  // Border the last row/column: det A = det T * (a_nn - u^T T^{-1} u),
  // where T is the leading (n-1)x(n-1) tridiagonal block and u is sparse
  // with u[0] = corner and u[n-2] = offdiag[n-2].
  const std::size_t m = n - 1;
  std::vector<double> d(m), l(m - 1);
  // Neumaier-compensated accumulation: callers difference log-determinants
  // of nearby matrices, so the sum must stay accurate to ~eps * |total|
  // rather than eps * n * |total|.
  double logdet = 0.0, comp = 0.0;
  auto accumulate = [&](double term) {
    const double t = logdet + term;
    if (std::abs(logdet) >= std::abs(term))
      comp += (logdet - t) + term;
    else
      comp += (term - t) + logdet;
    logdet = t;
  };
  d[0] = diag[0];
  if (!(d[0] > 0.0)) throw Error("cyclic logdet: matrix not positive definite");
  accumulate(std::log(d[0]));
  for (std::size_t i = 1; i < m; ++i) {
    l[i - 1] = offdiag[i - 1] / d[i - 1];
    d[i] = diag[i] - l[i - 1] * offdiag[i - 1];
    if (!(d[i] > 0.0)) throw Error("cyclic logdet: matrix not positive definite");
    accumulate(std::log(d[i]));
  }
  // Solve T y = u with the LDL factors.
  std::vector<double> y(m, 0.0);
  y[0] = corner;
  y[m - 1] = offdiag[m - 1];
  for (std::size_t i = 1; i < m; ++i) y[i] -= l[i - 1] * y[i - 1];
  for (std::size_t i = 0; i < m; ++i) y[i] /= d[i];
  for (std::size_t i = m - 1; i-- > 0;) y[i] -= l[i] * y[i + 1];
  const double uty = corner * y[0] + offdiag[m - 1] * y[m - 1];
  const double schur = diag[m] - uty;
  if (!(schur > 0.0)) throw Error("cyclic logdet: matrix not positive definite");
  accumulate(std::log(schur));
  return logdet + comp;
}

}  // namespace effaction
