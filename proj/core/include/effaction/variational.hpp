#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "effaction/effective.hpp"
#include "effaction/problem.hpp"

namespace effaction {

struct SolverOptions {
  double damping = 0.5;     // relaxation factor for the fixed-point iteration
  double rel_tol = 1e-12;   // relative residual in Omega^2
  int max_iter = 500;
  SmearOptions smear{};
};

struct SolverReport {
  enum class Method { damped_iteration, bracketed_root };
  int iterations = 0;
  double final_residual = 0.0;  // |Omega^2 - F(Omega^2)| / Omega^2
  bool converged = false;
  Method method = Method::damped_iteration;
};

const char* method_name(SolverReport::Method m);

/// One solved point of the self-consistency equation
///   Omega^2 = (1/m) d^2/dx^2 V_{a2}(x) at a2 = a2_Omega(x),
/// together with the variational effective potential
///   W = hbar Omega / 2 - m Omega^2 a2 / 2 + V_{a2}(x).
struct SelfConsistentPoint {
  double x = 0.0;
  double Omega = 0.0;
  double a2 = 0.0;
  double W = 0.0;
  SolverReport report;
};

/// Damped fixed-point iteration on Omega^2 (relaxation `damping`), falling
/// back to a bracketed root search on g(s) = s - F(s) when the iteration
/// stalls or leaves s > 0.  Throws NoFixedPointError when no positive root
/// exists in the searched bracket, or Error("non-convergent...") with the
/// report attached to the message when neither stage converges.
SelfConsistentPoint solve_trial_frequency(const ValidatedProblem& p, double x,
                                          double kT,
                                          const SolverOptions& opts = {});

/// W(x) from a fresh solve at this point.
double variational_potential(const ValidatedProblem& p, double x, double kT);

/// Per-grid-point results over the problem domain.  Cells that could not
/// be computed hold NaN and are excluded by the valid flag (omega is
/// tracked separately: a point may solve even where V'' <= 0).
struct EffectiveTable {
  std::vector<double> x;
  std::vector<double> omega;   // local frequency; NaN where V'' <= 0
  std::vector<double> Omega;   // trial frequency
  std::vector<double> a2;
  std::vector<double> V;       // bare potential
  std::vector<double> W;       // variational effective potential
  std::vector<double> m_eff;   // m + Z evaluated at the solved Omega
  std::vector<std::uint8_t> valid;
  std::vector<SolverReport> reports;
  double kT = 0.0;

  std::size_t size() const { return x.size(); }
  std::size_t valid_count() const;
};

/// Solves every point of a uniform grid over the problem domain.
/// Unsolvable points are flagged, not fatal; throws only when no point at
/// all is solvable.
EffectiveTable tabulate_effective(const ValidatedProblem& p, int grid_points,
                                  double kT, const SolverOptions& opts = {});

}  // namespace effaction
