#pragma once

#include <optional>
#include <string>

#include "effaction/dynamics.hpp"
#include "effaction/problem.hpp"
#include "effaction/variational.hpp"

namespace effaction {

/// A run configuration read from a flat INI-style file:
///
///   [problem]
///   mass      = "1"
///   potential = "0.5*x^2"
///   hbar      = 1.0
///   kT        = 0.0
///   domain    = -6 6
///
///   [solver]
///   tolerance = 1e-12
///   damping   = 0.5
///   max_iter  = 500
///
///   [grid]
///   points = 801
///
///   [integrator]
///   rel_tol = 1e-10
///   abs_tol = 1e-12
///
///   [output]
///   path = out.csv
///
/// Expressions are double-quoted; numbers are plain.  Lines starting with
/// '#' or ';' are comments.  Unknown sections or keys are errors so typos
/// cannot silently fall back to defaults.
struct RunConfig {
  ProblemSpec problem;
  SolverOptions solver;
  int grid_points = 801;
  IntegratorOptions integrator;
  std::optional<std::string> output_path;
};

/// Throws ConfigError with a line reference on any malformed input.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace effaction
