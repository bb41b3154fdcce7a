#pragma once

#include <string>
#include <vector>

#include "effaction/expr.hpp"

namespace effaction {

/// The physical problem: coordinate-dependent mass m(x), potential V(x),
/// hbar, thermal energy k_B*T and the spatial domain of interest.
/// Units are the caller's business; only positivity and consistency are
/// enforced here.
struct ProblemSpec {
  Expression mass;
  Expression potential;
  double hbar = 1.0;
  double kT = 0.0;
  double x_lo = 0.0;
  double x_hi = 0.0;
};

/// A ProblemSpec that passed validation on a dense probe grid.
/// Immutable and freely shareable across concurrent computations.
class ValidatedProblem {
 public:
  /// Probes a uniform grid of `probe_points` and checks: x_lo < x_hi,
  /// hbar > 0, kT >= 0, m(x) > 0 everywhere, and both expressions
  /// evaluable on the whole domain.  Throws ValidationError carrying the
  /// complete list of findings.
  static ValidatedProblem validate(ProblemSpec spec, int probe_points = 1001);

  /// Non-throwing variant: returns all findings, empty when valid.
  static std::vector<std::string> check(const ProblemSpec& spec,
                                        int probe_points = 1001);

  double mass(double x) const { return spec_.mass(x); }
  Jet4 mass_jet(double x) const { return spec_.mass.jet(x); }
  double potential(double x) const { return spec_.potential(x); }
  Jet4 potential_jet(double x) const { return spec_.potential.jet(x); }

  const Expression& mass_expr() const { return spec_.mass; }
  const Expression& potential_expr() const { return spec_.potential; }

  double hbar() const { return spec_.hbar; }
  double kT() const { return spec_.kT; }
  double x_lo() const { return spec_.x_lo; }
  double x_hi() const { return spec_.x_hi; }
  bool contains(double x) const { return x >= spec_.x_lo && x <= spec_.x_hi; }

  /// Same problem with a different hbar/kT (used by limit studies).
  ValidatedProblem with_hbar(double hbar) const;
  ValidatedProblem with_kT(double kT) const;

 private:
  explicit ValidatedProblem(ProblemSpec spec) : spec_(std::move(spec)) {}
  ProblemSpec spec_;
};

}  // namespace effaction
