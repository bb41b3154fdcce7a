#include "effaction/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "effaction/errors.hpp"
#include "effaction/tridiagonal.hpp"

namespace effaction {

namespace {

// Orthonormal Hermite recurrence (weight exp(-t^2)); the Christoffel sum
// of squares at a node gives the reciprocal Gauss weight.
double christoffel_weight(int n, double x) {
  const double pi_quarter = std::pow(std::numbers::pi, -0.25);
  double pkm1 = 0.0;
  double pk = pi_quarter;
  double sum = pk * pk;
  for (int k = 0; k < n - 1; ++k) {
    const double pkp1 =
        (x * pk * std::sqrt(2.0 / (k + 1))) - pkm1 * std::sqrt(double(k) / (k + 1));
    pkm1 = pk;
    pk = pkp1;
    sum += pk * pk;
  }
  return 1.0 / sum;
}

GaussHermiteRule build_rule(int n) {
  // Nodes are the eigenvalues of the Jacobi matrix: zero diagonal,
  // off-diagonal sqrt(k/2).
  std::vector<double> diag(n, 0.0), off(n - 1);
  for (int k = 1; k < n; ++k) off[k - 1] = std::sqrt(0.5 * k);
  GaussHermiteRule rule;
  rule.nodes = tridiagonal_eigenvalues(diag, off, n, 1e-15 * std::sqrt(2.0 * n));
  rule.weights.reserve(n);
  for (double x : rule.nodes) rule.weights.push_back(christoffel_weight(n, x));
  return rule;
}

}  // namespace

const GaussHermiteRule& GaussHermiteRule::of_order(int n) {
  if (n < 1) throw Error("Gauss-Hermite order must be positive");
  static std::mutex mutex;
  static std::map<int, GaussHermiteRule> cache;
  std::scoped_lock lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
  return it->second;
}

namespace {

// Gauss-Kronrod 7-15 node pairs on [-1, 1].
constexpr double kKronrodNodes[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,                0.207784955007898,
    0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};

constexpr double kKronrodWeights[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728, 0.204432940075298,
    0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};

constexpr double kGaussWeights[4] = {  // weights for nodes 1,3,5,7 (symmetric)
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct Segment {
  double value;
  double error;
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fk[15];
  for (int i = 0; i < 15; ++i) fk[i] = f(c + h * kKronrodNodes[i]);
  double kronrod = 0.0;
  for (int i = 0; i < 15; ++i) kronrod += kKronrodWeights[i] * fk[i];
  double gauss = kGaussWeights[3] * fk[7];
  for (int i = 0; i < 3; ++i) gauss += kGaussWeights[i] * (fk[2 * i + 1] + fk[13 - 2 * i]);
  kronrod *= h;
  gauss *= h;
  return {kronrod, std::abs(kronrod - gauss)};
}

double integrate_recursive(const std::function<double(double)>& f, double a,
                           double b, double tol, int depth) {
  const Segment s = gk15(f, a, b);
  if (s.error <= tol || depth <= 0) return s.value;
  const double c = 0.5 * (a + b);
  return integrate_recursive(f, a, c, 0.5 * tol, depth - 1) +
         integrate_recursive(f, c, b, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double rel_tol, double abs_tol,
                          int max_depth) {
  const Segment whole = gk15(f, a, b);
  const double tol = std::max(abs_tol, rel_tol * std::abs(whole.value));
  if (whole.error <= tol) return whole.value;
  const double c = 0.5 * (a + b);
  return integrate_recursive(f, a, c, 0.5 * tol, max_depth) +
         integrate_recursive(f, c, b, 0.5 * tol, max_depth);
}

double integrate_half_line(const std::function<double(double)>& f, double scale,
                           double rel_tol) {
  if (!(scale > 0.0)) throw Error("half-line integration needs a positive scale");
  auto mapped = [&](double u) {
    const double t = std::tan(u);
    const double x = scale * t;
    const double jac = scale * (1.0 + t * t);
    return f(x) * jac;
  };
  // Stay a hair away from pi/2; the mapped integrand of any convergent
  // integral is bounded there but tan overflows.
  const double upper = std::numbers::pi / 2 - 1e-12;
  return integrate_adaptive(mapped, 0.0, upper, rel_tol);
}

}  // namespace effaction
