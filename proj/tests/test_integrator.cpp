#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "gch2/integrator.hpp"
#include "oracles.hpp"

using namespace gch2;
using oracle::max_coeff_diff;

namespace {

StatePair sample_state(const PeriodicGrid& grid) {
  return {SpectralField::constant(grid, 0.5) + SpectralField::cosine(grid, 1, 0.3),
          SpectralField::constant(grid, -0.2) + SpectralField::sine(grid, 2, 0.4, 0.3)};
}

const SystemParams kParams{2, 1, 1.5, 2.5};

double distance(const StatePair& a, const StatePair& b, double s = 1.0) {
  const StatePair d = a - b;
  return pair_norm(d.u, d.v, s);
}

StatePair run(const StatePair& init, double dt, double t_end) {
  IntegratorConfig cfg;
  cfg.dt = dt;
  cfg.t_end = t_end;
  return integrate(init.u, init.v, kParams, cfg).states.back();
}

}  // namespace

TEST_CASE("integrator config validation") {
  IntegratorConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.dt = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.t_end = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.blowup_threshold = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.record_every = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("rk4 keeps constants and zero") {
  const PeriodicGrid grid(16);
  const StatePair constants{SpectralField::constant(grid, 0.3), SpectralField::constant(grid, -2.0)};
  const StatePair next = step_rk4(constants, kParams, 0.1);
  CHECK(max_coeff_diff(next.u, constants.u) == 0.0);
  CHECK(max_coeff_diff(next.v, constants.v) == 0.0);
  const StatePair zero{SpectralField(grid), SpectralField(grid)};
  CHECK(step_rk4(zero, kParams, 0.1).u.sup_norm() == 0.0);
  CHECK_THROWS_AS(step_rk4(zero, kParams, 0.0), std::invalid_argument);
}

TEST_CASE("rk4 one-step error has local order five") {
  const PeriodicGrid grid(64);
  const StatePair init = sample_state(grid);
  const auto one_vs_two = [&](double dt) {
    const StatePair coarse = step_rk4(init, kParams, dt);
    const StatePair fine = step_rk4(step_rk4(init, kParams, dt / 2), kParams, dt / 2);
    return distance(coarse, fine);
  };
  const double ratio = one_vs_two(0.1) / one_vs_two(0.05);
  CHECK(ratio == doctest::Approx(32.0).epsilon(0.1));
}

TEST_CASE("global self-convergence ratio is about 16") {
  const PeriodicGrid grid(64);
  const StatePair init = sample_state(grid);
  const double t_end = 1.0;
  const StatePair a = run(init, 0.1, t_end);
  const StatePair b = run(init, 0.05, t_end);
  const StatePair c = run(init, 0.025, t_end);
  const double ratio = distance(a, b, 1.75) / distance(b, c, 1.75);
  CHECK(ratio > 14.0);
  CHECK(ratio < 18.0);
}

TEST_CASE("spatial resolution is converged once the data are resolved") {
  const StatePair coarse = run(sample_state(PeriodicGrid(128)), 0.05, 0.5);
  const StatePair fine = run(sample_state(PeriodicGrid(256)), 0.05, 0.5);
  const auto cu = coarse.u.half_spectrum();
  const auto fu = fine.u.half_spectrum();
  double diff = 0.0;
  for (std::size_t k = 0; k < cu.size(); ++k) diff = std::max(diff, std::abs(cu[k] - fu[k]));
  CHECK(diff < 1e-8);
}

TEST_CASE("integrate records every step plus the final time") {
  const PeriodicGrid grid(32);
  const StatePair init = sample_state(grid);
  IntegratorConfig cfg;
  cfg.dt = 0.1;
  cfg.t_end = 0.95;  // rounds up to 10 steps of 0.095
  cfg.record_every = 3;
  const Trajectory traj = integrate(init.u, init.v, kParams, cfg);
  REQUIRE(traj.size() == 5);
  CHECK(traj.times.front() == 0.0);
  CHECK(traj.times[1] == doctest::Approx(0.285));
  CHECK(traj.times[3] == doctest::Approx(0.855));
  CHECK(traj.times.back() == 0.95);
  for (std::size_t i = 1; i < traj.size(); ++i) CHECK(traj.times[i] > traj.times[i - 1]);
  CHECK(max_coeff_diff(traj.states.front().u, init.u) == 0.0);
}

TEST_CASE("zero and constant data give flat trajectories") {
  const PeriodicGrid grid(16);
  IntegratorConfig cfg;
  cfg.dt = 0.01;
  cfg.t_end = 1.0;
  cfg.record_every = 10;
  const Trajectory zero = integrate(SpectralField(grid), SpectralField(grid), kParams, cfg);
  for (const auto& s : zero.states) CHECK(s.u.sup_norm() + s.v.sup_norm() == 0.0);

  const auto c1 = SpectralField::constant(grid, 0.8);
  const auto c2 = SpectralField::constant(grid, -0.6);
  cfg.dt = 1e-4;  // 10^4 steps
  cfg.record_every = 1000;
  const Trajectory flat = integrate(c1, c2, kParams, cfg);
  for (const auto& s : flat.states) {
    CHECK(max_coeff_diff(s.u, c1) < 1e-15);
    CHECK(max_coeff_diff(s.v, c2) < 1e-15);
  }
  CHECK(size_check(flat, 3.0).ok);
  CHECK(size_check(zero, 3.0).ok);
}

TEST_CASE("recorded states stay real") {
  const PeriodicGrid grid(32);
  const StatePair init = sample_state(grid);
  IntegratorConfig cfg;
  cfg.dt = 0.05;
  cfg.t_end = 0.5;
  const Trajectory traj = integrate(init.u, init.v, kParams, cfg);
  for (const auto& s : traj.states) {
    CHECK(s.u.coeff(0).imag() == 0.0);
    CHECK(s.u.coeff(16).imag() == 0.0);
    CHECK(s.v.coeff(16).imag() == 0.0);
  }
}

TEST_CASE("blow-up guard") {
  const PeriodicGrid grid(32);
  const StatePair init = sample_state(grid);
  IntegratorConfig cfg;
  cfg.dt = 0.05;
  cfg.t_end = 0.5;
  cfg.blowup_threshold = 0.6;  // the data already touch 0.8
  try {
    integrate(init.u, init.v, kParams, cfg);
    FAIL("expected BlowUp");
  } catch (const BlowUp& e) {
    CHECK(e.time() == doctest::Approx(0.05));
    CHECK(e.sup() > 0.6);
    CHECK(e.partial().size() == 1);
  }

  std::vector<double> vals(grid.size(), 0.1);
  vals[3] = std::numeric_limits<double>::quiet_NaN();
  const auto bad = SpectralField::from_values(grid, vals);
  cfg.blowup_threshold = 1e6;
  CHECK_THROWS_AS(integrate(bad, init.v, kParams, cfg), BlowUp);
}

TEST_CASE("cfl time step") {
  const PeriodicGrid grid(32);
  const StatePair small{SpectralField::constant(grid, 0.1), SpectralField::constant(grid, 0.2)};
  CHECK(cfl_time_step(small, kParams, 64, 0.5) == doctest::Approx(0.5 / 64));
  const StatePair large{SpectralField::constant(grid, 3.0), SpectralField::constant(grid, 2.0)};
  // max(1, |v|^p = 4, |u|^q = 3) = 4
  CHECK(cfl_time_step(large, kParams, 10, 0.5) == doctest::Approx(0.5 / 40));
  CHECK_THROWS_AS(cfl_time_step(small, kParams, 10, 0.0), std::invalid_argument);
}

TEST_CASE("size check flags growth beyond twice the initial norm") {
  const PeriodicGrid grid(16);
  Trajectory traj;
  const auto c = [&](double x) { return StatePair{SpectralField::constant(grid, x), SpectralField(grid)}; };
  traj.times = {0.0, 0.5, 1.0};
  traj.states = {c(1.0), c(2.09), c(2.2)};
  const SizeCheckReport r = size_check(traj, 1.0);
  CHECK_FALSE(r.ok);
  REQUIRE(r.violating_times.size() == 1);
  CHECK(r.violating_times[0] == 1.0);
  CHECK(r.max_ratio == doctest::Approx(2.2));
  CHECK(size_check(Trajectory{{0.0, 1.0}, {c(1.0), c(2.09)}}, 1.0).ok);
  CHECK_THROWS_AS(size_check(Trajectory{}, 1.0), std::invalid_argument);
}
