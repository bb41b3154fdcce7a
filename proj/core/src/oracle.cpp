#include "effaction/oracle.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "effaction/effective.hpp"
#include "effaction/errors.hpp"
#include "effaction/quadrature.hpp"
#include "effaction/tridiagonal.hpp"

namespace effaction {

namespace {

bool mass_is_constant(const ValidatedProblem& p) {
  if (const auto* poly = p.mass_expr().polynomial())
    return poly->size() == 1;
  // Not a polynomial; probe the derivative instead.
  for (double x : {p.x_lo(), 0.5 * (p.x_lo() + p.x_hi()), p.x_hi()}) {
    const Jet4 m = p.mass_jet(x);
    if (std::abs(m.d[1]) > 1e-14 * std::max(1.0, std::abs(m.d[0]))) return false;
  }
  return true;
}

}  // namespace

GridSpectrum grid_spectrum(const ValidatedProblem& p, double x_lo, double x_hi,
                           int n, int count, const GroundStateOptions& opts) {
  if (!(x_lo < x_hi)) throw Error("eigensolver: empty interval");
  if (n < 8) throw Error("eigensolver: need at least 8 interior points");
  const double h = (x_hi - x_lo) / (n + 1);
  const double hb2 = p.hbar() * p.hbar() / 2.0;
  std::vector<double> diag(n), off(n - 1);

  if (opts.symmetric_mass_ordering) {
    // -(hbar^2/2) d/dx (1/m) d/dx + V on the Dirichlet grid.
    std::vector<double> beta(n + 1);  // 1/m at the half points
    for (int i = 0; i <= n; ++i)
      beta[i] = 1.0 / p.mass(x_lo + h * (i + 0.5));
    for (int i = 0; i < n; ++i) {
      const double x = x_lo + h * (i + 1);
      diag[i] = hb2 * (beta[i] + beta[i + 1]) / (h * h) + p.potential(x);
      if (i + 1 < n) off[i] = -hb2 * beta[i + 1] / (h * h);
    }
  } else {
    if (!mass_is_constant(p))
      throw Error("eigensolver: non-constant mass needs the symmetric-ordering "
                  "flag (no canonical quantization otherwise)");
    const double m = p.mass(0.5 * (x_lo + x_hi));
    const double kin = hb2 / (m * h * h);
    for (int i = 0; i < n; ++i) {
      const double x = x_lo + h * (i + 1);
      diag[i] = 2.0 * kin + p.potential(x);
      if (i + 1 < n) off[i] = -kin;
    }
  }

  GridSpectrum s;
  s.grid_size = n;
  s.spacing = h;
  s.eigenvalues = tridiagonal_eigenvalues(diag, off, count, opts.eigen_tol);
  return s;
}

namespace {

// Ground state with the leading h^2 error removed by Richardson
// extrapolation over one doubling.
double extrapolated_e0(const ValidatedProblem& p, double x_lo, double x_hi,
                       int n, const GroundStateOptions& opts) {
  const double coarse = grid_spectrum(p, x_lo, x_hi, n, 1, opts).eigenvalues[0];
  const double fine = grid_spectrum(p, x_lo, x_hi, 2 * n, 1, opts).eigenvalues[0];
  return (4.0 * fine - coarse) / 3.0;
}

}  // namespace

GridSpectrum ground_state_energy(const ValidatedProblem& p, double x_lo,
                                 double x_hi, int n,
                                 const GroundStateOptions& opts) {
  double prev = extrapolated_e0(p, x_lo, x_hi, n, opts);
  GridSpectrum out;
  for (;;) {
    n *= 2;
    if (2 * n > opts.max_grid)
      throw Error("eigensolver: not converged at the maximum grid size");
    const double cur = extrapolated_e0(p, x_lo, x_hi, n, opts);
    out.convergence_estimate = std::abs(cur - prev);
    prev = cur;
    if (out.convergence_estimate <= opts.tol) break;
  }
  out.grid_size = 2 * n;
  out.spacing = (x_hi - x_lo) / (2 * n + 1);
  out.eigenvalues = {prev};

  if (opts.widen_check) {
    const double pad = 0.2 * (x_hi - x_lo);
    const int n_wide = static_cast<int>(n * 1.4);
    const double wide = extrapolated_e0(p, x_lo - pad, x_hi + pad, n_wide, opts);
    const double shift = std::abs(wide - prev);
    if (shift > std::max(100 * opts.tol, 10 * out.convergence_estimate))
      throw Error("eigensolver: ground state moved by " + std::to_string(shift) +
                  " when the box was widened; domain too narrow");
  }
  return out;
}

double FrequencyIntegral::relative_error() const {
  const double scale = std::max(std::abs(closed_form), 1e-300);
  return std::abs(quadrature - closed_form) / scale;
}

FrequencyIntegral frequency_integral(int p_exp, int q_exp, double m, double v2) {
  if (p_exp < 0 || q_exp < 1) throw Error("frequency integral: need p >= 0, q >= 1");
  if (!(m > 0.0) || !(v2 > 0.0)) throw Error("frequency integral: need m > 0, v2 > 0");
  if (2 * q_exp - p_exp <= 1)
    throw Error("frequency integral: divergent for p=" + std::to_string(p_exp) +
                ", q=" + std::to_string(q_exp));
  if (p_exp % 2 == 1) return {0.0, 0.0};  // odd integrand over the full line

  const double half = (p_exp + 1) / 2.0;
  FrequencyIntegral out;
  out.closed_form = std::tgamma(q_exp - half) * std::tgamma(half) /
                    (2.0 * std::numbers::pi * std::pow(v2, q_exp - half) *
                     std::pow(m, half) * std::tgamma(double(q_exp)));

  const double scale = std::sqrt(v2 / m);
  out.quadrature =
      2.0 *
      integrate_half_line(
          [&](double nu) {
            return std::pow(nu, p_exp) / std::pow(m * nu * nu + v2, q_exp);
          },
          scale, 1e-12) /
      (2.0 * std::numbers::pi);
  return out;
}

double one_loop_slope_residual(const ValidatedProblem& p, double x) {
  const Jet4 vj = p.potential_jet(x);
  if (!(vj.d[2] > 0.0)) throw InstabilityError(x, vj.d[2]);
  const double m = p.mass(x);
  const double analytic = p.hbar() / (4.0 * std::sqrt(m * vj.d[2]));
  const double via_integral =
      0.5 * p.hbar() * frequency_integral(0, 1, m, vj.d[2]).quadrature;
  return std::abs(analytic - via_integral) / analytic;
}

namespace {

// Compensated accumulator for the long sums below; their differences sit
// many orders below the raw magnitudes.
struct NeumaierSum {
  double sum = 0.0, comp = 0.0;
  void add(double term) {
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term))
      comp += (sum - t) + term;
    else
      comp += (term - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

// Normalized lattice log-determinant of the Euclidean second-variation
// operator on a periodic background.  K is the cyclic tridiagonal
// discretization of
//   -d/dtau ( m(X) d/dtau ) + V''(X) - m'(X) Xtautau - m''(X) Xtau^2 / 2
// and the sliced fluctuation factor is [ prod_i (m_{i+1/2}/h) / (h^n det K) ]^{-1/2},
// so the physically normalized quantity is
//   D = log det K + n log h - sum_i log(m_{i+1/2}/h)
//     = log det(h^2 K) - sum_i log m_{i+1/2},
// which for a static stable background tends to omega*T.  Assembling h^2 K
// directly keeps every pivot O(1).
double normalized_logdet(const ValidatedProblem& p,
                         const std::vector<double>& X,
                         const std::vector<double>& X_half,
                         const std::vector<double>& Xtau,
                         const std::vector<double>& Xtautau, double h) {
  const std::size_t n = X.size();
  std::vector<double> m_half(n), diag(n), off(n - 1);
  for (std::size_t i = 0; i < n; ++i) m_half[i] = p.mass(X_half[i]);

  NeumaierSum measure;
  for (std::size_t i = 0; i < n; ++i) measure.add(std::log(m_half[i]));

  for (std::size_t i = 0; i < n; ++i) {
    const Jet4 mj = p.mass_jet(X[i]);
    const Jet4 vj = p.potential_jet(X[i]);
    const double w = vj.d[2] - mj.d[1] * Xtautau[i] - 0.5 * mj.d[2] * Xtau[i] * Xtau[i];
    const double left = m_half[(i + n - 1) % n];
    const double right = m_half[i];
    diag[i] = left + right + h * h * w;
    if (i + 1 < n) off[i] = -m_half[i];
  }
  const double corner = -m_half[n - 1];

  return cyclic_spd_tridiagonal_logdet(diag, off, corner) - measure.value();
}

}  // namespace

ZProbeResult fluctuation_determinant_z_probe(const ValidatedProblem& p,
                                             double x0,
                                             const ZProbeOptions& opts) {
  if (p.kT() != 0.0)
    throw Error("determinant probe supports zero temperature only");
  if (opts.n_steps < 128) throw Error("determinant probe: n_steps too small");
  if (opts.fit_points < 2) throw Error("determinant probe: need >= 2 fit points");

  const double omega0 = local_frequency(p, x0);
  const double nu_base = opts.nu > 0.0 ? opts.nu : omega0 / 20.0;
  const double width = std::sqrt(quantum_width(p, x0, omega0));
  const double eps = opts.eps_rel * width;
  const double h = (2.0 * std::numbers::pi / nu_base) / opts.n_steps;

  ZProbeResult result;
  result.eps = eps;

  std::vector<double> zs, ss;  // scaled nu^2 and the static-subtracted signal
  for (int j = 1; j <= opts.fit_points; ++j) {
    const double nu = nu_base / j;
    const double T = 2.0 * std::numbers::pi / nu;
    const std::size_t n = static_cast<std::size_t>(opts.n_steps) * j;

    std::vector<double> X(n), X_half(n), Xtau(n), Xtautau(n);
    std::vector<double> X0(n), X0_half(n), zero(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double tau = h * double(i);
      const double s = std::sin(nu * tau), c = std::cos(nu * tau);
      X[i] = x0 + eps * s;
      X_half[i] = x0 + eps * std::sin(nu * (tau + 0.5 * h));
      Xtau[i] = eps * nu * c;
      Xtautau[i] = -eps * nu * nu * s;
      X0[i] = x0;
      X0_half[i] = x0;
    }

    const double D_eps = normalized_logdet(p, X, X_half, Xtau, Xtautau, h);
    const double D_0 = normalized_logdet(p, X0, X0_half, zero, zero, h);
    const double gamma = 0.5 * p.hbar() * (D_eps - D_0) / T;

    // Static piece: the adiabatic (nu -> 0) limit of the lattice rate is
    // the orbit average of the per-point dispersion (hbar/h) asinh(h w/2),
    // which removes the h^2 static residue exactly and leaves the fit
    // intercept at the roundoff level.  The trapezoid average over one
    // period is spectrally accurate for the analytic periodic integrand.
    auto lattice_rate = [&](double x) {
      const double w = local_frequency(p, x);
      return (p.hbar() / h) * std::asinh(0.5 * h * w);
    };
    NeumaierSum v_sum;
    for (std::size_t i = 0; i < n; ++i) v_sum.add(lattice_rate(X[i]));
    const double static_piece = v_sum.value() / double(n) - lattice_rate(x0);

    zs.push_back((nu * nu) / (nu_base * nu_base));
    ss.push_back(gamma - static_piece);

    if (j == 1) {
      result.v_static = 0.5 * p.hbar() * D_0 / T;
      const double v_ref = one_loop_potential(p, x0);
      result.v_static_rel_error = std::abs(result.v_static - v_ref) / v_ref;
    }
    result.nus.push_back(nu);
  }

  // Least squares for s = c0 + c1 z over the scaled frequencies.
  const double n_fit = double(zs.size());
  double sz = 0, szz = 0, su = 0, szu = 0;
  for (std::size_t i = 0; i < zs.size(); ++i) {
    sz += zs[i];
    szz += zs[i] * zs[i];
    su += ss[i];
    szu += zs[i] * ss[i];
  }
  const double det = n_fit * szz - sz * sz;
  const double tr = n_fit + szz;
  const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
  const double lam_max = 0.5 * (tr + disc), lam_min = 0.5 * (tr - disc);
  result.fit_condition = lam_min > 0 ? lam_max / lam_min : std::numeric_limits<double>::infinity();
  if (!(result.fit_condition < opts.max_condition))
    throw Error("determinant probe: fit ill-conditioned (condition " +
                std::to_string(result.fit_condition) + ")");

  const double c1_scaled = (n_fit * szu - sz * su) / det;
  const double c0 = (su - c1_scaled * sz) / n_fit;
  const double c1 = c1_scaled / (nu_base * nu_base);

  result.fit_intercept = c0;
  result.z_estimate = 4.0 * c1 / (eps * eps);
  return result;
}

}  // namespace effaction
