#include <benchmark/benchmark.h>

#include <numbers>

#include "effaction/dynamics.hpp"
#include "effaction/effective.hpp"
#include "effaction/oracle.hpp"
#include "effaction/problem.hpp"
#include "effaction/variational.hpp"

namespace {

using namespace effaction;

ValidatedProblem quartic() {
  ProblemSpec s;
  s.mass = Expression::parse("1");
  s.potential = Expression::parse("0.5*x^2 + 0.5*x^4");
  s.x_lo = -4;
  s.x_hi = 4;
  return ValidatedProblem::validate(s);
}

ValidatedProblem transcendental() {
  ProblemSpec s;
  s.mass = Expression::parse("1 + 0.2*tanh(x)^2");
  s.potential = Expression::parse("0.5*x^2 + 0.3*exp(0.2*sin(x))");
  s.x_lo = -4;
  s.x_hi = 4;
  return ValidatedProblem::validate(s);
}

void BM_jet_eval(benchmark::State& state) {
  const auto p = transcendental();
  double x = -2.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(p.potential_jet(x).d[4]);
    x = x < 2.0 ? x + 1e-3 : -2.0;
  }
}
BENCHMARK(BM_jet_eval);

void BM_smear_polynomial(benchmark::State& state) {
  const auto p = quartic();
  for (auto _ : state)
    benchmark::DoNotOptimize(smear_potential(p, 0.7, 0.3));
}
BENCHMARK(BM_smear_polynomial);

void BM_smear_quadrature(benchmark::State& state) {
  const auto p = transcendental();
  SmearOptions opts;
  opts.quadrature_order = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(smear_potential(p, 0.7, 0.3, opts));
}
BENCHMARK(BM_smear_quadrature)->Arg(32)->Arg(64)->Arg(128);

void BM_solve_trial_frequency(benchmark::State& state) {
  const auto p = quartic();
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_trial_frequency(p, 0.5, 0.0).Omega);
}
BENCHMARK(BM_solve_trial_frequency);

void BM_tabulate(benchmark::State& state) {
  const auto p = quartic();
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(tabulate_effective(p, n, 0.0).valid_count());
  state.SetComplexityN(n);
}
BENCHMARK(BM_tabulate)->Arg(64)->Arg(256)->Arg(1024)->Complexity(benchmark::oN);

void BM_integrate_harmonic_period(benchmark::State& state) {
  ProblemSpec s;
  s.mass = Expression::parse("1");
  s.potential = Expression::parse("0.5*x^2");
  s.x_lo = -6;
  s.x_hi = 6;
  const auto p = ValidatedProblem::validate(s);
  for (auto _ : state) {
    const auto rec = integrate_motion(p, Mode::classical, 1.0, 0.0,
                                      2 * std::numbers::pi);
    benchmark::DoNotOptimize(rec.samples.back().x);
  }
}
BENCHMARK(BM_integrate_harmonic_period);

void BM_ground_state(benchmark::State& state) {
  const auto p = quartic();
  GroundStateOptions opts;
  opts.widen_check = false;
  for (auto _ : state)
    benchmark::DoNotOptimize(ground_state_energy(p, -4, 4, 500, opts).eigenvalues[0]);
}
BENCHMARK(BM_ground_state);

void BM_z_probe(benchmark::State& state) {
  const auto p = quartic();
  ZProbeOptions opts;
  opts.n_steps = static_cast<int>(state.range(0));
  opts.fit_points = 3;
  for (auto _ : state)
    benchmark::DoNotOptimize(fluctuation_determinant_z_probe(p, 0.4, opts).z_estimate);
}
BENCHMARK(BM_z_probe)->Arg(512)->Arg(2048);

}  // namespace

BENCHMARK_MAIN();
