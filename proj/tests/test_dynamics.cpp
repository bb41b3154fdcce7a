#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "effaction/dynamics.hpp"
#include "testutil.hpp"

using namespace effaction;
using testutil::make_problem;
using testutil::rel_diff;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_CASE("classical harmonic orbit matches cos(t) over ten periods") {
  const auto p = make_problem("1", "0.5*x^2", 1.0, 0.0, -6, 6);
  const auto rec = integrate_motion(p, Mode::classical, 1.0, 0.0, 10 * kTwoPi);
  REQUIRE(rec.samples.size() > 10);
  double worst = 0.0;
  for (const auto& s : rec.samples)
    worst = std::max(worst, std::abs(s.x - std::cos(s.t)));
  CHECK(worst <= 1e-8);
  CHECK(rec.max_energy_drift <= 1e-8);
  CHECK_FALSE(rec.clipped);
  // Timestamps strictly increasing.
  for (std::size_t i = 1; i < rec.samples.size(); ++i)
    CHECK(rec.samples[i].t > rec.samples[i - 1].t);
}

TEST_CASE("variable-mass energy conservation and step-halved reference") {
  // The amplitude-1 period is ~7.64, so 77 time units cover ten of them.
  const auto p = make_problem("1 + x^2", "0.5*x^2", 1.0, 0.0, -6, 6);
  const auto rec = integrate_motion(p, Mode::classical, 1.0, 0.0, 77.0);
  CHECK(rec.max_energy_drift <= 1e-8);

  // Independent reference: the same orbit at much tighter tolerances.
  IntegratorOptions tight;
  tight.rel_tol = 1e-13;
  tight.abs_tol = 1e-14;
  const auto ref = integrate_motion(p, Mode::classical, 1.0, 0.0, 77.0, tight);
  CHECK(std::abs(rec.samples.back().x - ref.samples.back().x) <= 1e-8);
  CHECK(std::abs(rec.samples.back().v - ref.samples.back().v) <= 1e-8);
}

TEST_CASE("effective harmonic orbit equals classical up to the energy offset") {
  const auto p = make_problem("1", "0.5*x^2", 1.0, 0.0, -6, 6);
  const auto table = tabulate_effective(p, 801, 0.0);

  IntegratorOptions opts;
  for (int k = 1; k <= 4; ++k) opts.mandatory_times.push_back(k * kTwoPi / 2);
  const auto cl = integrate_motion(p, Mode::classical, 1.0, 0.0, 2 * kTwoPi, opts);
  const auto ef = integrate_motion(p, Mode::effective, 1.0, 0.0, 2 * kTwoPi, opts, &table);

  // Compare at the shared mandatory times.
  for (double t : opts.mandatory_times) {
    auto find = [&](const TrajectoryRecord& r) {
      for (const auto& s : r.samples)
        if (std::abs(s.t - t) < 1e-12) return s;
      FAIL("mandatory time missing from record");
      return r.samples.front();
    };
    const auto a = find(cl), b = find(ef);
    CHECK(std::abs(a.x - b.x) <= 1e-8);
    CHECK(std::abs(a.v - b.v) <= 1e-8);
    CHECK(rel_diff(b.E - a.E, 0.5) < 1e-9);  // hbar omega / 2
  }
}

TEST_CASE("effective mode at hbar ~ 0 reproduces the classical trajectory") {
  const auto p = make_problem("1 + x^2", "0.5*x^2", 1e-12, 0.0, -6, 6);
  const auto table = tabulate_effective(p, 801, 0.0);

  IntegratorOptions opts;
  for (int k = 1; k <= 8; ++k) opts.mandatory_times.push_back(k * 6.0);
  const auto cl = integrate_motion(p, Mode::classical, 1.0, 0.0, 50.0, opts);
  const auto ef = integrate_motion(p, Mode::effective, 1.0, 0.0, 50.0, opts, &table);

  for (double t : opts.mandatory_times) {
    auto find = [&](const TrajectoryRecord& r) {
      for (const auto& s : r.samples)
        if (std::abs(s.t - t) < 1e-12) return s;
      FAIL("mandatory time missing from record");
      return r.samples.front();
    };
    CHECK(std::abs(find(cl).x - find(ef).x) <= 1e-6);
    CHECK(std::abs(find(cl).v - find(ef).v) <= 1e-6);
  }
}

TEST_CASE("effective-mode energy conservation and table-grid insensitivity") {
  const auto p = make_problem("1", "0.5*x^2 + 0.5*x^4", 1.0, 0.0, -4, 4);
  const auto table = tabulate_effective(p, 3201, 0.0);
  const auto rec = integrate_motion(p, Mode::effective, 1.0, 0.0, 63.0, {}, &table);
  CHECK(rec.max_energy_drift <= 1e-8);

  // Variable-mass problem at its bundled table density, ten periods.
  const auto vm = make_problem("1 + x^2", "0.5*x^2", 1.0, 0.0, -6, 6);
  const auto vm_table = tabulate_effective(vm, 6401, 0.0);
  const auto vm_rec = integrate_motion(vm, Mode::effective, 1.0, 0.0, 77.0, {}, &vm_table);
  CHECK(vm_rec.max_energy_drift <= 1e-8);

  // Doubling the table resolution moves the final state by far less than
  // the trajectory tolerance the run is quoted at.
  const auto fine = tabulate_effective(p, 6401, 0.0);
  const auto rec2 = integrate_motion(p, Mode::effective, 1.0, 0.0, 63.0, {}, &fine);
  CHECK(std::abs(rec.samples.back().x - rec2.samples.back().x) <= 1e-6);
  CHECK(std::abs(rec.samples.back().v - rec2.samples.back().v) <= 1e-6);
}

TEST_CASE("time reversal returns to the start") {
  const auto p = make_problem("1 + 0.3*x^2", "0.5*x^2 + 0.1*x^4", 1.0, 0.0, -6, 6);
  const auto fwd = integrate_motion(p, Mode::classical, 0.8, 0.3, 25.0);
  const auto& end = fwd.samples.back();
  const auto back = integrate_motion(p, Mode::classical, end.x, -end.v, 25.0);
  CHECK(std::abs(back.samples.back().x - 0.8) <= 1e-6);
  CHECK(std::abs(back.samples.back().v - (-0.3)) <= 1e-6);
}

TEST_CASE("halving the tolerances moves the final state less than the tolerance") {
  const auto p = make_problem("1", "0.5*x^2 + 0.5*x^4", 1.0, 0.0, -4, 4);
  IntegratorOptions loose;
  loose.rel_tol = 1e-8;
  loose.abs_tol = 1e-10;
  IntegratorOptions half = loose;
  half.rel_tol /= 2;
  half.abs_tol /= 2;
  const auto a = integrate_motion(p, Mode::classical, 1.0, 0.0, 30.0, loose);
  const auto b = integrate_motion(p, Mode::classical, 1.0, 0.0, 30.0, half);
  const double scale = 1.0 + std::abs(b.samples.back().x) + std::abs(b.samples.back().v);
  CHECK(std::abs(a.samples.back().x - b.samples.back().x) <= loose.rel_tol * scale * 100);
}

TEST_CASE("adiabaticity ratio definition and profile") {
  CHECK(adiabaticity_ratio(0.0, 1.0, 0.5) == 0.0);
  CHECK(std::abs(adiabaticity_ratio(0.070711, 1.0, 0.5) - 0.1) < 1e-5);

  // Along a harmonic orbit the ratio vanishes at the turning points and
  // peaks at the origin.
  const auto p = make_problem("1", "0.5*x^2", 1.0, 0.0, -6, 6);
  const auto rec = integrate_motion(p, Mode::classical, 1.0, 0.0, kTwoPi);
  double r_at_center = 0.0, r_near_turn = 1.0;
  for (const auto& s : rec.samples) {
    if (std::abs(s.x) < 0.05) r_at_center = std::max(r_at_center, s.r);
    if (std::abs(std::abs(s.x) - 1.0) < 1e-3) r_near_turn = std::min(r_near_turn, s.r);
  }
  CHECK(r_at_center > 10 * r_near_turn);
  // Peak ratio for amplitude 1: |v|max = 1, a2 = 1/2 -> r = sqrt(2).
  CHECK(std::abs(rec.max_adiabaticity - std::sqrt(2.0)) < 1e-3);
}

TEST_CASE("leaving the domain clips the trajectory with an error") {
  const auto p = make_problem("1", "-x", 1.0, 0.0, -2, 2);  // constant push right
  try {
    integrate_motion(p, Mode::classical, 0.0, 1.0, 100.0);
    FAIL("expected TrajectoryError");
  } catch (const TrajectoryError& e) {
    CHECK(std::string(e.what()).find("left domain") != std::string::npos);
    CHECK(e.partial().clipped);
    CHECK(e.partial().samples.size() > 1);
    CHECK(e.partial().samples.back().x >= 2.0);
  }
}

TEST_CASE("effective mode refuses to run from a flagged region") {
  const auto p = make_problem("1", "0.5*x^2 - 0.05*x^4", 1.0, 0.0, -2, 2);
  const auto table = tabulate_effective(p, 201, 0.0);
  REQUIRE(table.valid_count() < table.size());
  CHECK_THROWS_AS(
      integrate_motion(p, Mode::effective, 1.9, 0.0, 1.0, {}, &table), Error);

  // And an orbit that starts valid but runs into the flagged band clips.
  try {
    integrate_motion(p, Mode::effective, 0.0, 1.2, 50.0, {}, &table);
    FAIL("expected TrajectoryError");
  } catch (const TrajectoryError& e) {
    CHECK(e.partial().clipped);
  }
}
