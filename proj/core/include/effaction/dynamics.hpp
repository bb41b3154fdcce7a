#pragma once

#include <optional>
#include <string>
#include <vector>

#include "effaction/errors.hpp"
#include "effaction/problem.hpp"
#include "effaction/variational.hpp"

namespace effaction {

enum class Mode { classical, effective };

struct IntegratorOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double adiabaticity_threshold = 0.1;
  long max_steps = 10'000'000;
  /// Extra times the integrator must land on exactly (ascending, within
  /// (0, t_max)); used by comparisons that need samples at shared times.
  std::vector<double> mandatory_times;
};

struct TrajectorySample {
  double t, x, v, E, r;  // r: adiabaticity ratio |v| / (Omega sqrt(a2))
};

struct TrajectoryRecord {
  Mode mode = Mode::classical;
  std::vector<TrajectorySample> samples;  // strictly increasing t
  double max_energy_drift = 0.0;          // max |E - E0| / |E0|
  double max_adiabaticity = 0.0;
  long flagged_samples = 0;  // samples with r >= threshold
  bool clipped = false;      // true when the run ended early
  std::string termination;   // reason when clipped
};

/// Thrown when the orbit leaves usable territory; carries whatever part of
/// the trajectory was completed.
class TrajectoryError : public Error {
 public:
  TrajectoryError(const std::string& what, TrajectoryRecord partial)
      : Error(what), partial_(std::move(partial)) {}
  const TrajectoryRecord& partial() const { return partial_; }

 private:
  TrajectoryRecord partial_;
};

/// Integrates mu(x) xddot + mu'(x) xdot^2 / 2 + U'(x) = 0 with an adaptive
/// embedded Runge-Kutta pair (Dormand-Prince 5(4)).
///
/// classical mode: (mu, U) = (m, V) straight from the expressions.
/// effective mode: (mu, U) = (m_eff, W) through cubic interpolation of the
/// contiguous valid run of `table` containing x0; the interpolant's own
/// derivative supplies mu' and U'.
///
/// Energy per sample uses the mode-matching pair; the adiabaticity column
/// uses the solved (Omega, a2) in effective mode and the local frequency
/// with its width in classical mode (+inf where V'' <= 0).
TrajectoryRecord integrate_motion(const ValidatedProblem& p, Mode mode,
                                  double x0, double v0, double t_max,
                                  const IntegratorOptions& opts = {},
                                  const EffectiveTable* table = nullptr);

/// Dimensionless slowness measure |v| / (Omega sqrt(a2)).
double adiabaticity_ratio(double v, double Omega, double a2);

}  // namespace effaction
