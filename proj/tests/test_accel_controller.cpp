#include "doctest.h"

#include <random>

#include "longctrl/accel_controller.hpp"

using namespace longctrl;

namespace {

// Parameter set used in the hand-computed oracles below.
VehicleParams oracle_params() {
  VehicleParams p;
  p.m = 800.0;
  p.J_drivetrain = 9.0;
  p.r_wheel_rear = 0.3;
  p.rho_air = 1.2;
  p.c_d_A = 1.0;
  p.c_rr = 0.015;
  p.g = 9.81;
  return p;
}

}  // namespace

TEST_CASE("driving resistances") {
  const VehicleParams p = oracle_params();
  AccelCtrlConfig cfg;

  SUBCASE("standstill has no resistance at all") {
    const auto r = driving_resistances(0.0, cfg, p);
    CHECK(r.F_aero == doctest::Approx(0.0));
    CHECK(r.F_roll == doctest::Approx(0.0));
  }
  SUBCASE("drag at 50 m/s") {
    // 0.5 * 1.2 * 1.0 * 50^2 = 1500 N
    const auto r = driving_resistances(50.0, cfg, p);
    CHECK(r.F_aero == doctest::Approx(1500.0).epsilon(1e-9));
  }
  SUBCASE("rolling resistance once moving") {
    // 0.015 * 800 * 9.81 = 117.72 N
    const auto r = driving_resistances(10.0, cfg, p);
    CHECK(r.F_roll == doctest::Approx(117.72).epsilon(1e-9));
  }
  SUBCASE("rolling resistance gated below the threshold") {
    cfg.v_roll_threshold = 0.5;
    CHECK(driving_resistances(0.4, cfg, p).F_roll == doctest::Approx(0.0));
    CHECK(driving_resistances(0.6, cfg, p).F_roll == doctest::Approx(117.72).epsilon(1e-9));
  }
  SUBCASE("negative speed rejected") {
    CHECK_THROWS_AS(driving_resistances(-1.0, cfg, p), std::invalid_argument);
  }
}

TEST_CASE("feedforward force") {
  const VehicleParams p = oracle_params();
  AccelCtrlConfig cfg;

  SUBCASE("zero demand at rest") {
    CHECK(feedforward_force(0.0, 0.0, cfg, p) == doctest::Approx(0.0));
  }
  SUBCASE("pure inertia term") {
    // (800 + 9 / 0.3^2) * 2 = 900 * 2 = 1800 N, no resistances at v = 0
    CHECK(feedforward_force(2.0, 0.0, cfg, p) == doctest::Approx(1800.0).epsilon(1e-9));
  }
  SUBCASE("braking demand with resistances") {
    // 900 * (-10) + 1500 + 117.72 = -7382.28 N
    CHECK(feedforward_force(-10.0, 50.0, cfg, p) ==
          doctest::Approx(-7382.28).epsilon(1e-9));
  }
  SUBCASE("affine in the acceleration target with slope m + J/r^2") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> ad(-30.0, 30.0);
    std::uniform_real_distribution<double> vd(0.0, 90.0);
    const double slope = p.m + p.J_drivetrain / (p.r_wheel_rear * p.r_wheel_rear);
    for (int i = 0; i < 1000; ++i) {
      const double v = vd(rng);
      const double a = ad(rng);
      const double df = feedforward_force(a, v, cfg, p) - feedforward_force(0.0, v, cfg, p);
      CHECK(df == doctest::Approx(slope * a).epsilon(1e-9));
    }
  }
  SUBCASE("resistances always enter as positive traction demand") {
    // Steady cruise (a = 0) therefore needs positive force at any speed.
    for (double v : {5.0, 20.0, 60.0}) {
      CHECK(feedforward_force(0.0, v, cfg, p) > 0.0);
    }
  }
}

TEST_CASE("controller output is pure feedforward at zero tracking error") {
  const VehicleParams p = oracle_params();
  AccelCtrlConfig cfg;
  AccelController ctrl(cfg, p);
  VehicleState vs;
  vs.v_est = 30.0;
  for (int i = 0; i < 50; ++i) {
    vs.a_x_meas = -4.0;  // measured equals target
    const double out = ctrl.step(AccelCommand{-4.0}, vs, 0.01);
    CHECK(out == doctest::Approx(feedforward_force(-4.0, 30.0, cfg, p)).epsilon(1e-12));
  }
}

TEST_CASE("persistent error integrates up to the feedback limit") {
  const VehicleParams p = oracle_params();
  AccelCtrlConfig cfg;  // kp 600, ki 1200, limits +-2000 N
  AccelController ctrl(cfg, p);
  VehicleState vs;
  vs.v_est = 0.0;
  vs.a_x_meas = 0.0;
  const double ff = feedforward_force(0.5, 0.0, cfg, p);
  // Conditional integration rejects the increment that would cross the
  // limit, so the correction parks within one quantum ki*e*dt of it.
  const double quantum = cfg.pid.ki * 0.5 * 0.01;
  double prev_correction = 0.0;
  bool saturated = false;
  for (int i = 0; i < 400; ++i) {
    const double out = ctrl.step(AccelCommand{0.5}, vs, 0.01);
    const double correction = out - ff;
    CHECK(correction >= prev_correction - 1e-9);  // monotone build-up
    CHECK(correction <= cfg.pid.out_max + 1e-9);
    prev_correction = correction;
    if (correction > cfg.pid.out_max - quantum - 1e-9) saturated = true;
  }
  CHECK(saturated);
}

TEST_CASE("non-finite target rejected") {
  AccelCtrlConfig cfg;
  AccelController ctrl(cfg, VehicleParams{});
  VehicleState vs;
  CHECK_THROWS_AS(
      ctrl.step(AccelCommand{std::numeric_limits<double>::infinity()}, vs, 0.01),
      std::invalid_argument);
}

TEST_CASE("config validation") {
  AccelCtrlConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.pid.out_min = 10.0;
  cfg.pid.out_max = -10.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
