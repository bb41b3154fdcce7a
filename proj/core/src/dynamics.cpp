#include "effaction/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "effaction/effective.hpp"
#include "effaction/spline.hpp"

namespace effaction {

double adiabaticity_ratio(double v, double Omega, double a2) {
  return std::abs(v) / (Omega * std::sqrt(a2));
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Mode-specific coefficient access for the equation of motion.
struct Coefficients {
  // mu, mu', U' at x.
  virtual void dynamic(double x, double& mu, double& mu1, double& U1) const = 0;
  virtual double energy(double x, double v) const = 0;
  virtual double adiabaticity(double x, double v) const = 0;
  virtual ~Coefficients() = default;
};

struct ClassicalCoefficients final : Coefficients {
  const ValidatedProblem& p;
  explicit ClassicalCoefficients(const ValidatedProblem& p) : p(p) {}

  void dynamic(double x, double& mu, double& mu1, double& U1) const override {
    const Jet4 m = p.mass_jet(x);
    const Jet4 v = p.potential_jet(x);
    mu = m.d[0];
    mu1 = m.d[1];
    U1 = v.d[1];
  }
  double energy(double x, double v) const override {
    return 0.5 * p.mass(x) * v * v + p.potential(x);
  }
  double adiabaticity(double x, double v) const override {
    const double vpp = p.potential_jet(x).d[2];
    if (!(vpp > 0.0)) return kInf;
    const double w = std::sqrt(vpp / p.mass(x));
    return adiabaticity_ratio(v, w, thermal_width(p, x, w, p.kT()));
  }
};

struct EffectiveCoefficients final : Coefficients {
  CubicSpline mu_s, W_s, Omega_s, a2_s;

  EffectiveCoefficients(const EffectiveTable& t, double x0) {
    // Largest contiguous run of valid points containing x0; orbits that
    // reach a flagged gap are errors rather than silent extrapolations.
    const std::size_t n = t.size();
    const double dx = (t.x.back() - t.x.front()) / double(n - 1);
    std::size_t i0 = static_cast<std::size_t>(
        std::clamp((x0 - t.x.front()) / dx, 0.0, double(n - 1)));
    if (!t.valid[i0] && i0 + 1 < n && t.valid[i0 + 1]) ++i0;
    if (!t.valid[i0])
      throw Error("effective coefficients unavailable at x0 (flagged point)");
    std::size_t lo = i0, hi = i0;
    while (lo > 0 && t.valid[lo - 1]) --lo;
    while (hi + 1 < n && t.valid[hi + 1]) ++hi;
    const std::size_t count = hi - lo + 1;
    if (count < 4)
      throw Error("effective coefficients unavailable: fewer than 4 solvable "
                  "grid points around x0");
    const double x_start = t.x[lo];
    auto window = [&](const std::vector<double>& col) {
      return std::span<const double>(col.data() + lo, count);
    };
    mu_s = CubicSpline(x_start, dx, window(t.m_eff));
    W_s = CubicSpline(x_start, dx, window(t.W));
    Omega_s = CubicSpline(x_start, dx, window(t.Omega));
    a2_s = CubicSpline(x_start, dx, window(t.a2));
  }

  void dynamic(double x, double& mu, double& mu1, double& U1) const override {
    mu = mu_s(x);
    mu1 = mu_s.derivative(x);
    U1 = W_s.derivative(x);
  }
  double energy(double x, double v) const override {
    return 0.5 * mu_s(x) * v * v + W_s(x);
  }
  double adiabaticity(double x, double v) const override {
    return adiabaticity_ratio(v, Omega_s(x), a2_s(x));
  }
};

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

struct State {
  double x, v;
};

}  // namespace

TrajectoryRecord integrate_motion(const ValidatedProblem& p, Mode mode,
                                  double x0, double v0, double t_max,
                                  const IntegratorOptions& opts,
                                  const EffectiveTable* table) {
  if (!p.contains(x0)) throw Error("initial position outside the problem domain");
  if (!(t_max > 0.0)) throw Error("t_max must be positive");

  ClassicalCoefficients classical(p);
  std::optional<EffectiveCoefficients> effective;
  double lo = p.x_lo(), hi = p.x_hi();
  if (mode == Mode::effective) {
    if (table == nullptr)
      throw Error("effective mode needs a tabulated EffectiveTable");
    effective.emplace(*table, x0);
    lo = effective->mu_s.x_min();
    hi = effective->mu_s.x_max();
    if (x0 < lo || x0 > hi)
      throw Error("effective coefficients unavailable at x0 (flagged point)");
  }
  const Coefficients& coeff =
      mode == Mode::effective ? static_cast<const Coefficients&>(*effective)
                              : static_cast<const Coefficients&>(classical);

  auto rhs = [&](const State& s, State& ds) {
    double mu, mu1, U1;
    coeff.dynamic(s.x, mu, mu1, U1);
    if (!(mu > 0.0)) throw Error("non-positive effective mass along the orbit");
    ds.x = s.v;
    ds.v = -(0.5 * mu1 * s.v * s.v + U1) / mu;
  };

  TrajectoryRecord rec;
  rec.mode = mode;

  State y{x0, v0};
  double t = 0.0;
  const double E0 = coeff.energy(y.x, y.v);

  auto push_sample = [&](double tt, const State& s) {
    const double E = coeff.energy(s.x, s.v);
    const double r = coeff.adiabaticity(s.x, s.v);
    rec.samples.push_back({tt, s.x, s.v, E, r});
    if (E0 != 0.0)
      rec.max_energy_drift =
          std::max(rec.max_energy_drift, std::abs(E - E0) / std::abs(E0));
    if (std::isfinite(r)) rec.max_adiabaticity = std::max(rec.max_adiabaticity, r);
    if (r >= opts.adiabaticity_threshold) ++rec.flagged_samples;
  };
  push_sample(0.0, y);

  auto clip = [&](const std::string& why, double at_t) {
    rec.clipped = true;
    rec.termination = why + " at t=" + std::to_string(at_t);
    throw TrajectoryError(rec.termination, rec);
  };

  State k1;
  rhs(y, k1);

  // Crude first step; the controller fixes it up within a few steps.
  const double d1 = std::max(std::abs(k1.x), std::abs(k1.v));
  double h = std::clamp(d1 > 0 ? 0.01 / d1 : 1e-4, 1e-10, t_max / 10);

  std::size_t next_mandatory = 0;
  auto next_stop = [&]() {
    while (next_mandatory < opts.mandatory_times.size() &&
           opts.mandatory_times[next_mandatory] <= t + 1e-15 * t_max)
      ++next_mandatory;
    return next_mandatory < opts.mandatory_times.size()
               ? std::min(opts.mandatory_times[next_mandatory], t_max)
               : t_max;
  };

  for (long step = 0; step < opts.max_steps; ++step) {
    if (t >= t_max) break;
    const double stop = next_stop();
    if (h > stop - t) h = stop - t;
    if (h < 16 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)))
      clip("step-size underflow", t);

    State k2{}, k3{}, k4{}, k5{}, k6{}, k7{}, yt{};
    const State* ks[5] = {&k1, &k2, &k3, &k4, &k5};
    auto stage = [&](double ax1, double ax2, double ax3, double ax4, double ax5,
                     State& out) {
      out.x = y.x + h * (ax1 * ks[0]->x + ax2 * ks[1]->x + ax3 * ks[2]->x +
                         ax4 * ks[3]->x + ax5 * ks[4]->x);
      out.v = y.v + h * (ax1 * ks[0]->v + ax2 * ks[1]->v + ax3 * ks[2]->v +
                         ax4 * ks[3]->v + ax5 * ks[4]->v);
    };
    bool rejected_by_domain = false;
    try {
      yt = {y.x + h * a21 * k1.x, y.v + h * a21 * k1.v};
      rhs(yt, k2);
      stage(a31, a32, 0, 0, 0, yt);
      rhs(yt, k3);
      stage(a41, a42, a43, 0, 0, yt);
      rhs(yt, k4);
      stage(a51, a52, a53, a54, 0, yt);
      rhs(yt, k5);
      stage(a61, a62, a63, a64, a65, yt);
      rhs(yt, k6);
    } catch (const Error&) {
      // A trial stage fell off the usable region; retry with a shorter step.
      rejected_by_domain = true;
    }

    State y5, err{};
    if (!rejected_by_domain) {
      y5.x = y.x + h * (b1 * k1.x + b3 * k3.x + b4 * k4.x + b5 * k5.x + b6 * k6.x);
      y5.v = y.v + h * (b1 * k1.v + b3 * k3.v + b4 * k4.v + b5 * k5.v + b6 * k6.v);
      try {
        rhs(y5, k7);  // FSAL stage
      } catch (const Error&) {
        rejected_by_domain = true;
      }
      err.x = h * (e1 * k1.x + e3 * k3.x + e4 * k4.x + e5 * k5.x + e6 * k6.x + e7 * k7.x);
      err.v = h * (e1 * k1.v + e3 * k3.v + e4 * k4.v + e5 * k5.v + e6 * k6.v + e7 * k7.v);
    }

    if (rejected_by_domain) {
      h *= 0.25;
      continue;
    }

    const double sx = opts.abs_tol + opts.rel_tol * std::max(std::abs(y.x), std::abs(y5.x));
    const double sv = opts.abs_tol + opts.rel_tol * std::max(std::abs(y.v), std::abs(y5.v));
    const double ex = err.x / sx, ev = err.v / sv;
    const double err_norm = std::sqrt(0.5 * (ex * ex + ev * ev));

    if (err_norm <= 1.0) {
      t += h;
      y = y5;
      k1 = k7;
      push_sample(t, y);
      if (y.x < lo || y.x > hi) {
        if (mode == Mode::effective && y.x >= p.x_lo() && y.x <= p.x_hi())
          clip("effective coefficients unavailable on orbit (flagged points)", t);
        clip("left domain", t);
      }
      if (t >= t_max) break;
    }
    const double factor =
        err_norm > 0 ? 0.9 * std::pow(err_norm, -0.2) : 5.0;
    h *= std::clamp(factor, 0.2, 5.0);
  }

  if (t < t_max) clip("maximum step count exceeded", t);
  return rec;
}

}  // namespace effaction
