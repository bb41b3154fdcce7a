// Batch front end: reads a problem config, runs tabulation / trajectory
// integration / self-validation / single-point solves, and writes
// deterministic CSV artifacts.  Data goes to the output files (or stdout
// for `solve` and `validate` tables); all human-readable diagnostics go to
// stderr.  Exit codes: 0 success, 1 computational failure, 2 usage or
// config error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "effaction/checks.hpp"
#include "effaction/config.hpp"
#include "effaction/dynamics.hpp"
#include "effaction/errors.hpp"
#include "effaction/io.hpp"
#include "effaction/oracle.hpp"
#include "effaction/problem.hpp"
#include "effaction/variational.hpp"

namespace {

using namespace effaction;

constexpr int kOk = 0;
constexpr int kComputeError = 1;
constexpr int kUsageError = 2;

struct CommonArgs {
  std::string config_path;
};

ValidatedProblem load_problem(const RunConfig& cfg) {
  return ValidatedProblem::validate(cfg.problem);
}

std::string require_out(const std::optional<std::string>& flag,
                        const RunConfig& cfg) {
  if (flag) return *flag;
  if (cfg.output_path) return *cfg.output_path;
  throw ConfigError("no output path: pass --out or set [output] path");
}

int run_tabulate(const CommonArgs& common, std::optional<int> grid,
                 std::optional<std::string> out) {
  const RunConfig cfg = load_config(common.config_path);
  const std::string out_path = require_out(out, cfg);
  const ValidatedProblem p = load_problem(cfg);
  const int points = grid.value_or(cfg.grid_points);

  const EffectiveTable table = tabulate_effective(p, points, cfg.problem.kT, cfg.solver);
  std::ostringstream buf;
  write_table_csv(table, buf);
  atomic_write_file(out_path, buf.str());

  const std::size_t flagged = table.size() - table.valid_count();
  std::cerr << "tabulated " << table.size() << " points (" << table.valid_count()
            << " valid, " << flagged << " flagged) -> " << out_path << "\n";
  std::cerr << "m_eff column: vm form (m + Z) evaluated at the solved trial "
               "frequency; the frequency-form mass is diagnostic only and its "
               "Omega'(X) would be the grid derivative of the solved column\n";
  if (flagged > 0)
    std::cerr << "warning: " << flagged << " grid points unsolvable (valid=0 rows)\n";
  return kOk;
}

int run_trajectory(const CommonArgs& common, const std::string& mode_name,
                   double x0, double v0, double t_max,
                   std::optional<std::string> out) {
  const RunConfig cfg = load_config(common.config_path);
  const std::string out_path = require_out(out, cfg);
  const ValidatedProblem p = load_problem(cfg);

  const Mode mode = mode_name == "classical" ? Mode::classical : Mode::effective;

  std::optional<EffectiveTable> table;
  if (mode == Mode::effective)
    table = tabulate_effective(p, cfg.grid_points, cfg.problem.kT, cfg.solver);

  auto finish = [&](const TrajectoryRecord& rec) {
    std::ostringstream buf;
    write_trajectory_csv(rec, buf);
    atomic_write_file(out_path, buf.str());
    std::cerr << "trajectory: " << rec.samples.size() << " samples, max |dE/E| = "
              << format_number(rec.max_energy_drift)
              << ", max adiabaticity r = " << format_number(rec.max_adiabaticity)
              << " (" << rec.flagged_samples << " samples at r >= 0.1)\n";
  };

  try {
    const TrajectoryRecord rec =
        integrate_motion(p, mode, x0, v0, t_max, cfg.integrator,
                         table ? &*table : nullptr);
    finish(rec);
    return kOk;
  } catch (const TrajectoryError& e) {
    finish(e.partial());  // clipped: keep what was computed, fail the run
    std::cerr << "error: " << e.what() << "\n";
    return kComputeError;
  }
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

int run_validate(const CommonArgs& common, bool z_probe) {
  const RunConfig cfg = load_config(common.config_path);
  const ValidatedProblem p = load_problem(cfg);

  CheckOptions opts;
  opts.run_z_probe = z_probe;
  const auto results = run_validation_suite(p, opts);

  // The machine-readable report goes to stdout with the same CSV
  // conventions as the data files; an aligned rendering goes to stderr.
  int failures = 0;
  std::cout << "check,status,residual,tolerance,note\n";
  std::fprintf(stderr, "%-44s %-6s %-13s %-10s %s\n", "check", "status",
               "residual", "tolerance", "note");
  for (const auto& r : results) {
    const char* status = !r.applicable ? "skip" : (r.passed ? "pass" : "FAIL");
    if (r.failed()) ++failures;
    std::cout << csv_quote(r.name) << ',' << status << ',';
    if (r.applicable)
      std::cout << format_number(r.residual) << ',' << format_number(r.tolerance);
    else
      std::cout << ',';
    std::cout << ',' << csv_quote(r.note) << '\n';
    if (r.applicable)
      std::fprintf(stderr, "%-44s %-6s %-13.4g %-10.2g %s\n", r.name.c_str(),
                   status, r.residual, r.tolerance, r.note.c_str());
    else
      std::fprintf(stderr, "%-44s %-6s %-13s %-10s %s\n", r.name.c_str(), status,
                   "-", "-", r.note.c_str());
  }
  if (failures > 0) {
    std::cerr << failures << " check(s) failed\n";
    return kComputeError;
  }
  return kOk;
}

int run_solve(const CommonArgs& common, double at) {
  const RunConfig cfg = load_config(common.config_path);
  const ValidatedProblem p = load_problem(cfg);
  const SelfConsistentPoint pt = solve_trial_frequency(p, at, cfg.problem.kT, cfg.solver);
  write_point_csv(pt, std::cout);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"self-consistent effective potential, mass and dynamics for a "
               "1-D particle with coordinate-dependent mass"};
  app.require_subcommand(1);

  CommonArgs common;

  auto* tab = app.add_subcommand("tabulate", "solve the trial frequency on a grid and write CSV");
  std::optional<int> tab_grid;
  std::optional<std::string> tab_out;
  tab->add_option("--config", common.config_path, "problem config file")->required();
  tab->add_option("--grid", tab_grid, "number of grid points (default from config)");
  tab->add_option("--out", tab_out, "output CSV path");

  auto* traj = app.add_subcommand("trajectory", "integrate the classical or corrected motion");
  std::string traj_mode;
  double traj_x0 = 0, traj_v0 = 0, traj_tmax = 0;
  std::optional<std::string> traj_out;
  traj->add_option("--config", common.config_path, "problem config file")->required();
  traj->add_option("--mode", traj_mode, "classical | effective")
      ->required()
      ->check(CLI::IsMember({"classical", "effective"}));
  traj->add_option("--x0", traj_x0, "initial position")->required();
  traj->add_option("--v0", traj_v0, "initial velocity")->required();
  traj->add_option("--tmax", traj_tmax, "integration time")->required();
  traj->add_option("--out", traj_out, "output CSV path");

  auto* val = app.add_subcommand("validate", "run the oracle-backed consistency checks");
  bool z_probe = false;
  val->add_option("--config", common.config_path, "problem config file")->required();
  val->add_flag("--z-probe", z_probe, "include the determinant probe of the kinetic coefficient");

  auto* sol = app.add_subcommand("solve", "solve one self-consistent point and print it as CSV");
  double solve_at = 0;
  sol->add_option("--config", common.config_path, "problem config file")->required();
  sol->add_option("--at", solve_at, "position X to solve at")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the message/help
    return e.get_exit_code() == 0 ? kOk : kUsageError;
  }

  try {
    if (tab->parsed()) return run_tabulate(common, tab_grid, tab_out);
    if (traj->parsed()) return run_trajectory(common, traj_mode, traj_x0, traj_v0, traj_tmax, traj_out);
    if (val->parsed()) return run_validate(common, z_probe);
    if (sol->parsed()) return run_solve(common, solve_at);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kComputeError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kComputeError;
  }
  return kUsageError;
}
