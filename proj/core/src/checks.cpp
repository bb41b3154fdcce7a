#include "effaction/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "effaction/effective.hpp"
#include "effaction/errors.hpp"
#include "effaction/oracle.hpp"
#include "effaction/variational.hpp"

namespace effaction {

namespace {

// Richardson-extrapolated central difference of a smooth callable.
template <typename F>
double central_derivative(F&& f, double x, double h) {
  const double d1 = (f(x + h) - f(x - h)) / (2 * h);
  const double d2 = (f(x + h / 2) - f(x - h / 2)) / h;
  return (4 * d2 - d1) / 3;
}

std::vector<double> stable_sample_points(const ValidatedProblem& p, int want) {
  std::vector<double> pts;
  const double lo = p.x_lo(), hi = p.x_hi();
  const double margin = 0.05 * (hi - lo);
  const int n = 4 * want;
  for (int i = 0; i < n && int(pts.size()) < want; ++i) {
    const double x = lo + margin + (hi - lo - 2 * margin) * i / double(n - 1);
    try {
      if (p.potential_jet(x).d[2] > 1e-8) pts.push_back(x);
    } catch (const Error&) {
    }
  }
  return pts;
}

bool is_constant_mass(const ValidatedProblem& p) {
  const auto* poly = p.mass_expr().polynomial();
  return poly && poly->size() == 1;
}

// Quadratic polynomial potential with positive curvature?
bool is_harmonic(const ValidatedProblem& p) {
  const auto* poly = p.potential_expr().polynomial();
  return poly && poly->size() == 3 && (*poly)[2] > 0.0 && is_constant_mass(p);
}

}  // namespace

std::vector<CheckResult> run_validation_suite(const ValidatedProblem& p,
                                              const CheckOptions& opts) {
  std::vector<CheckResult> results;
  std::mt19937 rng(opts.rng_seed);

  // Gradient consistency: analytic one-loop gradient against a finite
  // difference of the one-loop potential at stable points.
  {
    CheckResult r{.name = "one-loop gradient vs finite difference", .tolerance = 1e-6};
    const auto pts = stable_sample_points(p, 16);
    if (pts.empty()) {
      r.applicable = false;
      r.note = "no points with V'' > 0 in the domain";
    } else {
      double worst = 0.0;
      int used = 0;
      for (double x : pts) {
        try {
          const double grad = one_loop_gradient(p, x);
          const double fd = central_derivative(
              [&](double t) { return one_loop_potential(p, t); }, x, 1e-4);
          const double scale = std::max(std::abs(grad), 1e-12);
          worst = std::max(worst, std::abs(grad - fd) / scale);
          ++used;
        } catch (const Error&) {
          // neighbouring evaluation crossed into V'' <= 0; skip the point
        }
      }
      r.residual = worst;
      r.passed = used > 0 && worst <= r.tolerance;
      r.note = std::to_string(used) + " points";
    }
    results.push_back(std::move(r));
  }

  // Heat-equation identity: d/da2 of the smeared potential equals half its
  // second x-derivative; both sides through the quadrature path.
  {
    CheckResult r{.name = "heat-equation identity of smearing", .tolerance = 1e-8};
    std::uniform_real_distribution<double> ua(0.05, 1.0);
    const auto pts = stable_sample_points(p, 6);
    double worst = 0.0;
    int used = 0;
    SmearOptions force;
    force.force_quadrature = true;
    force.abs_tol = 1e-7;
    for (double x : (pts.empty() ? std::vector<double>{0.5 * (p.x_lo() + p.x_hi())}
                                 : pts)) {
      for (int k = 0; k < 3; ++k) {
        const double a2 = ua(rng);
        try {
          const double lhs = central_derivative(
              [&](double t) { return smear_potential(p, x, t, force); }, a2,
              1e-5 * a2 + 1e-7);
          const double rhs = 0.5 * smeared_curvature(p, x, a2, force);
          const double scale = std::max({std::abs(lhs), std::abs(rhs), 1.0});
          worst = std::max(worst, std::abs(lhs - rhs) / scale);
          ++used;
        } catch (const Error&) {
        }
      }
    }
    if (used == 0) {
      r.applicable = false;
      r.note = "smearing not evaluable on this problem";
    } else {
      r.residual = worst;
      r.passed = worst <= r.tolerance;
      r.note = std::to_string(used) + " (x, a2) samples";
    }
    results.push_back(std::move(r));
  }

  // Frequency-integral table: quadrature against the closed form for every
  // convergent even-p combination with p <= 4, q <= 3.
  {
    CheckResult r{.name = "frequency-integral closed form", .tolerance = 1e-8};
    double worst = 0.0;
    for (int pe : {0, 2, 4})
      for (int q = 1; q <= 3; ++q) {
        if (2 * q - pe <= 1) continue;
        for (double m : {0.5, 1.0, 2.0})
          for (double v2 : {0.25, 1.0, 4.0})
            worst = std::max(worst, frequency_integral(pe, q, m, v2).relative_error());
      }
    r.residual = worst;
    r.passed = worst <= r.tolerance;
    results.push_back(std::move(r));
  }

  // One-loop slope identity at sample points.
  {
    CheckResult r{.name = "one-loop slope vs frequency integral", .tolerance = 1e-8};
    const auto pts = stable_sample_points(p, 8);
    if (pts.empty()) {
      r.applicable = false;
      r.note = "no points with V'' > 0 in the domain";
    } else {
      double worst = 0.0;
      for (double x : pts) worst = std::max(worst, one_loop_slope_residual(p, x));
      r.residual = worst;
      r.passed = worst <= r.tolerance;
    }
    results.push_back(std::move(r));
  }

  // Harmonic exactness: for quadratic V and constant m the trial frequency,
  // effective potential and effective mass must all be exact.
  {
    CheckResult r{.name = "harmonic exactness", .tolerance = 1e-10};
    if (!is_harmonic(p)) {
      r.applicable = false;
      r.note = "potential is not quadratic with constant mass";
    } else {
      const auto& vp = *p.potential_expr().polynomial();
      const double m = p.mass(0.0);
      const double w0 = std::sqrt(2.0 * vp[2] / m);
      const EffectiveTable t = tabulate_effective(p, 101, p.kT());
      double worst = 0.0;
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (!t.valid[i]) {
          worst = 1.0;
          break;
        }
        worst = std::max(worst, std::abs(t.Omega[i] - w0) / w0);
        const double w_expect = p.potential(t.x[i]) + 0.5 * p.hbar() * w0;
        worst = std::max(worst,
                         std::abs(t.W[i] - w_expect) / std::max(std::abs(w_expect), 1e-12));
        worst = std::max(worst, std::abs(t.m_eff[i] - m) / m);
      }
      r.residual = worst;
      r.passed = worst <= r.tolerance;
    }
    results.push_back(std::move(r));
  }

  // Ground-state comparison: the minimum of W against the grid eigensolver.
  {
    CheckResult r{.name = "variational minimum vs ground state", .tolerance = 5e-2};
    if (!is_constant_mass(p)) {
      r.applicable = false;
      r.note = "mass is not constant; eigensolver ordering undefined";
    } else if (p.kT() != 0.0) {
      r.applicable = false;
      r.note = "kT > 0: ground-state comparison is a zero-temperature check";
    } else {
      try {
        const EffectiveTable t = tabulate_effective(p, 201, 0.0);
        double best_x = 0.0, best_w = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < t.size(); ++i)
          if (t.valid[i] && t.W[i] < best_w) {
            best_w = t.W[i];
            best_x = t.x[i];
          }
        // Golden-section refinement around the grid minimum.
        const double span = (p.x_hi() - p.x_lo()) / 200.0;
        double a = std::max(p.x_lo(), best_x - span);
        double b = std::min(p.x_hi(), best_x + span);
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double c = b - gr * (b - a), d = a + gr * (b - a);
        double fc = variational_potential(p, c, 0.0);
        double fd = variational_potential(p, d, 0.0);
        for (int it = 0; it < 60 && (b - a) > 1e-9; ++it) {
          if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = variational_potential(p, c, 0.0);
          } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = variational_potential(p, d, 0.0);
          }
        }
        best_w = std::min(fc, fd);
        const GridSpectrum gs = ground_state_energy(p, p.x_lo(), p.x_hi(), 1001);
        const double e0 = gs.eigenvalues[0];
        r.residual = std::abs(best_w - e0) / std::abs(e0);
        r.passed = r.residual <= r.tolerance;
        r.note = "min W = " + std::to_string(best_w) + ", E0 = " + std::to_string(e0);
      } catch (const Error& e) {
        r.passed = false;
        r.residual = std::numeric_limits<double>::infinity();
        r.note = e.what();
      }
    }
    results.push_back(std::move(r));
  }

  // Kinetic-coefficient probe (opt-in: it is the most expensive check).
  {
    CheckResult r{.name = "determinant probe of the kinetic coefficient",
                  .tolerance = 2e-2};
    if (!opts.run_z_probe) {
      r.applicable = false;
      r.note = "disabled (enable with --z-probe)";
    } else if (p.kT() != 0.0) {
      r.applicable = false;
      r.note = "T>0 unsupported by probe";
    } else {
      const auto pts = stable_sample_points(p, 16);
      if (pts.empty()) {
        r.applicable = false;
        r.note = "no stable point to probe";
      } else {
        try {
          // Probe the stable point nearest the domain centre.
          const double mid = 0.5 * (p.x_lo() + p.x_hi());
          double x0 = pts.front();
          for (double c : pts)
            if (std::abs(c - mid) < std::abs(x0 - mid)) x0 = c;
          const ZProbeResult zr = fluctuation_determinant_z_probe(p, x0);
          ZProbeOptions doubled;
          doubled.n_steps = 2 * ZProbeOptions{}.n_steps;
          const ZProbeResult zr2 = fluctuation_determinant_z_probe(p, x0, doubled);
          const double z_ref = kinetic_correction(p, x0);
          const double scale =
              std::max(std::abs(z_ref), p.mass(x0) * p.hbar() / local_frequency(p, x0));
          r.residual = std::abs(zr.z_estimate - z_ref) / scale;
          const double drift = std::abs(zr2.z_estimate - zr.z_estimate) /
                               std::max(std::abs(zr2.z_estimate), 1e-12);
          r.passed = r.residual <= r.tolerance;
          r.note = "x0=" + std::to_string(x0) + ", estimate " +
                   std::to_string(zr.z_estimate) + " vs analytic " +
                   std::to_string(z_ref) + ", doubling drift " + std::to_string(drift);
        } catch (const Error& e) {
          r.passed = false;
          r.residual = std::numeric_limits<double>::infinity();
          r.note = e.what();
        }
      }
    }
    results.push_back(std::move(r));
  }

  return results;
}

}  // namespace effaction
