#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "effaction/quadrature.hpp"
#include "effaction/spline.hpp"
#include "effaction/tridiagonal.hpp"
#include "testutil.hpp"

using namespace effaction;
using testutil::rel_diff;

TEST_CASE("Gauss-Hermite rules: weight sum and moment exactness") {
  for (int order : {8, 64, 128}) {
    const auto& rule = GaussHermiteRule::of_order(order);
    REQUIRE(rule.nodes.size() == std::size_t(order));
    double wsum = 0.0;
    for (double w : rule.weights) wsum += w;
    CHECK(rel_diff(wsum, std::sqrt(std::numbers::pi)) < 1e-13);

    // integral exp(-t^2) t^(2k) dt = Gamma(k + 1/2); exact for 2k <= 2n-1.
    double expect = std::sqrt(std::numbers::pi);
    for (int k = 1; 2 * k < 2 * order && k <= 12; ++k) {
      expect *= (2 * k - 1) / 2.0;
      double got = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        got += rule.weights[i] * std::pow(rule.nodes[i], 2 * k);
      CHECK(rel_diff(got, expect) < 1e-12);
    }

    // Nodes come out sorted and symmetric about zero.
    for (std::size_t i = 1; i < rule.nodes.size(); ++i)
      CHECK(rule.nodes[i] > rule.nodes[i - 1]);
    CHECK(std::abs(rule.nodes.front() + rule.nodes.back()) < 1e-12);
  }
}

TEST_CASE("adaptive quadrature on known integrals") {
  CHECK(rel_diff(integrate_adaptive([](double x) { return std::sin(x); }, 0.0,
                                    std::numbers::pi),
                 2.0) < 1e-12);
  // A sharp feature the fixed rule cannot see without subdivision.
  CHECK(rel_diff(integrate_adaptive(
                     [](double x) { return 1.0 / (1e-4 + x * x); }, -1.0, 1.0),
                 2.0 * std::atan(100.0) / 1e-2) < 1e-9);
  // Half line: integral dx / (1 + x^2) = pi / 2.
  CHECK(rel_diff(integrate_half_line([](double x) { return 1.0 / (1 + x * x); }, 1.0),
                 std::numbers::pi / 2) < 1e-11);
}

TEST_CASE("tridiagonal eigenvalues of the discrete Laplacian") {
  // diag 2, off -1: eigenvalues 2 - 2 cos(k pi / (n+1)).
  const int n = 64;
  std::vector<double> diag(n, 2.0), off(n - 1, -1.0);
  for (int k : {0, 1, 5, 20}) {
    const double expect = 2.0 - 2.0 * std::cos((k + 1) * std::numbers::pi / (n + 1));
    CHECK(rel_diff(tridiagonal_eigenvalue(diag, off, k, 1e-14), expect) < 1e-10);
  }
  CHECK(sturm_count_below(diag, off, 2.0) == n / 2);
}

TEST_CASE("cyclic log-determinant against the circulant closed form") {
  // Constant cyclic tridiagonal: eigenvalues d + 2 c cos(2 pi k / n).
  const int n = 257;
  const double d = 3.5, c = -1.2;
  std::vector<double> diag(n, d), off(n - 1, c);
  double expect = 0.0;
  for (int k = 0; k < n; ++k)
    expect += std::log(d + 2 * c * std::cos(2 * std::numbers::pi * k / n));
  CHECK(rel_diff(cyclic_spd_tridiagonal_logdet(diag, off, c), expect) < 1e-12);
}

TEST_CASE("cyclic log-determinant on a non-uniform SPD matrix via cofactor oracle") {
  // Small n: compare against a dense determinant by Laplace-free LU
  // (plain Gaussian elimination written out here as the oracle).
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> du(2.5, 4.0), co(-1.0, -0.2);
  const int n = 9;
  std::vector<double> diag(n), off(n - 1);
  for (auto& v : diag) v = du(rng);
  for (auto& v : off) v = co(rng);
  const double corner = co(rng);

  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) a[i][i] = diag[i];
  for (int i = 0; i + 1 < n; ++i) a[i][i + 1] = a[i + 1][i] = off[i];
  a[0][n - 1] = a[n - 1][0] = corner;
  double logdet = 0.0;
  for (int col = 0; col < n; ++col) {
    logdet += std::log(a[col][col]);
    for (int row = col + 1; row < n; ++row) {
      const double f = a[row][col] / a[col][col];
      for (int j = col; j < n; ++j) a[row][j] -= f * a[col][j];
    }
  }
  CHECK(rel_diff(cyclic_spd_tridiagonal_logdet(diag, off, corner), logdet) < 1e-12);
}

TEST_CASE("SPD tridiagonal solve") {
  const int n = 12;
  std::vector<double> diag(n, 4.0), off(n - 1, 1.0), x(n);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (auto& v : x) v = u(rng);
  // rhs = A x, solve, compare.
  std::vector<double> rhs(n);
  for (int i = 0; i < n; ++i) {
    rhs[i] = diag[i] * x[i];
    if (i > 0) rhs[i] += off[i - 1] * x[i - 1];
    if (i + 1 < n) rhs[i] += off[i] * x[i + 1];
  }
  spd_tridiagonal_solve(diag, off, rhs);
  for (int i = 0; i < n; ++i) CHECK(rel_diff(rhs[i], x[i]) < 1e-12);
}

TEST_CASE("cubic spline: exact on cubics, accurate derivative, O(h^4) data error") {
  // Not-a-knot reproduces a cubic polynomial exactly, endpoints included.
  auto cubic = [](double x) { return 1.5 - 0.7 * x + 0.3 * x * x - 0.2 * x * x * x; };
  auto dcubic = [](double x) { return -0.7 + 0.6 * x - 0.6 * x * x; };
  const int n = 11;
  const double x0 = -2.0, dx = 0.4;
  std::vector<double> y(n);
  for (int i = 0; i < n; ++i) y[i] = cubic(x0 + dx * i);
  const CubicSpline s(x0, dx, y);
  for (double x = -2.0; x <= 2.0001; x += 0.05) {
    CHECK(std::abs(s(x) - cubic(x)) < 1e-13);
    CHECK(std::abs(s.derivative(x) - dcubic(x)) < 1e-12);
  }

  // Smooth non-polynomial: interpolation error shrinks like h^4.
  auto f = [](double x) { return std::sin(1.3 * x); };
  auto err_for = [&](int pts) {
    const double h = 4.0 / (pts - 1);
    std::vector<double> data(pts);
    for (int i = 0; i < pts; ++i) data[i] = f(-2.0 + h * i);
    const CubicSpline sp(-2.0, h, data);
    double worst = 0.0;
    for (double x = -2.0; x <= 2.0; x += 0.0101)
      worst = std::max(worst, std::abs(sp(x) - f(x)));
    return worst;
  };
  const double e1 = err_for(33), e2 = err_for(65);
  CHECK(e2 < e1 / 10);  // 16x in theory; leave slack for the ends
}
