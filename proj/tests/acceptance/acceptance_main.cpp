// Acceptance gate for the longitudinal control stack. Each criterion prints
// one [PASS]/[FAIL] line; the process exits non-zero if any criterion fails.
// Tolerances are pinned here, next to the checks they protect.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "longctrl/accel_controller.hpp"
#include "longctrl/brake_pressure_controller.hpp"
#include "longctrl/force_controller.hpp"
#include "longctrl/runner.hpp"
#include "longctrl/slip_estimation.hpp"
#include "longctrl/stability_controller.hpp"

using namespace longctrl;

namespace {

struct Criterion {
  int id{0};
  std::string name;
  bool pass{true};
  double seconds{0.0};
  std::vector<std::string> notes;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), f, a, b, c);
  return buf;
}

void expect(Criterion& c, bool ok, const std::string& what) {
  if (!ok) {
    c.pass = false;
    c.notes.push_back(what);
  }
}

// Every closed-loop log produced by the gate, kept for the global invariant
// sweep in criterion 9 and the warmup merge property in criterion 6.
struct RecordedRun {
  std::string label;
  Log log;
  StackConfig stack;
  bool predictive{true};
};
std::vector<RecordedRun> g_runs;

const RunResult& record(const std::string& label, const ScenarioConfig& scn,
                        const StackConfig& stack) {
  static std::deque<RunResult> keep;  // stable storage for returned refs
  keep.push_back(run_scenario(scn, stack));
  g_runs.push_back({label, keep.back().log, stack, scn.predictive_gear});
  return keep.back();
}

double worst_rear_slip_mag(const LogRow& r) {
  return std::max(std::abs(r.kappa_rl), std::abs(r.kappa_rr));
}

double worst_front_slip_mag(const LogRow& r) {
  return std::max(std::abs(r.kappa_fl), std::abs(r.kappa_fr));
}

// Point-mass optimum braking distance from v1 down to v2 with both axles at
// the tire-force peak (mu * F_z), plus air drag and rolling resistance.
double ideal_braking_distance(double v1, double v2, double mu, const VehicleParams& p) {
  double s = 0.0;
  const double dv = 1.0e-4;
  for (double v = v1; v > v2; v -= dv) {
    const double load = p.m * p.g + 0.5 * p.rho_air * p.c_l_A * v * v;
    const double a = (mu * load + 0.5 * p.rho_air * p.c_d_A * v * v + p.c_rr * p.m * p.g) / p.m;
    s += v / a * dv;
  }
  return s;
}

// ---------------------------------------------------------------------------
// 1: closed-form oracles for the force/driveline relations plus randomized
//    homogeneity and linearity properties.
// ---------------------------------------------------------------------------
Criterion criterion_equations() {
  Criterion c{1, "equation oracles and randomized properties"};
  const auto t0 = std::chrono::steady_clock::now();
  const double kRel = 1.0e-9;
  auto close = [&](double got, double want) {
    return std::abs(got - want) <= kRel * std::max(1.0, std::abs(want));
  };

  VehicleParams ex;
  ex.m = 800.0;
  ex.J_drivetrain = 9.0;
  ex.r_wheel_rear = 0.3;
  ex.gear_ratios = {2.0};
  ex.tau_final_drive = 3.0;
  ex.eta_drivetrain = 0.9;
  ex.c_d_A = 1.0;
  ex.rho_air = 1.2;
  ex.c_rr = 0.015;
  AccelCtrlConfig acfg;

  // 6000 rpm at the wheel speed that makes the closed driveline spin exactly
  // that fast: v = 6000 rpm * 0.3 m / (gearing 6).
  const double v6000 = 31.415926535897932;
  expect(c, close(engine_speed_from_velocity(v6000, 1, ex), 6000.0), "engine speed oracle");

  // Effective mass 900 kg, no resistances at standstill.
  expect(c, close(feedforward_force(2.0, 0.0, acfg, ex), 1800.0), "feedforward oracle at rest");
  // -10 m/s^2 at 50 m/s: 900*(-10) + 1500 + 117.72.
  expect(c, close(feedforward_force(-10.0, 50.0, acfg, ex), -7382.28),
         "feedforward oracle at speed");
  const DrivingResistances rr50 = driving_resistances(50.0, acfg, ex);
  expect(c, close(rr50.F_aero, 1500.0), "aero drag oracle");
  expect(c, close(rr50.F_roll, 117.72), "rolling resistance oracle");

  // 0.3 / (2 * 3 * 0.9) * 5400 = 300 Nm through the flat-ceiling map.
  EngineCharacteristics maps;
  maps.drag_torque_curve.x = {0.0};
  maps.drag_torque_curve.y = {40.0};
  maps.torque_max_curve.x = {0.0};
  maps.torque_max_curve.y = {400.0};
  ForceCtrlConfig fcfg;
  expect(c, close(motor_torque_target(5400.0, 1, 5000.0, fcfg, ex, maps), 300.0),
         "torque demand oracle");

  // 10 kN on a 0.3 m wheel through the caliper geometry
  // 2*pi*(0.02)^2*0.45*0.15 m^3.
  expect(c, close(axle_pressure_from_force(10000.0, 0.3, ex), 3000.0 / (5.4e-5 * kPi)),
         "axle pressure oracle");

  // Velocity-blend corner cases: pressure path, deceleration path, clamps.
  const SlipConfig scfg = default_slip_config();
  expect(c, close(blend_factor(2.5e5, 0.0, scfg), 0.5), "blend pressure oracle");
  expect(c, close(blend_factor(0.0, -5.5, scfg), 0.5), "blend deceleration oracle");
  expect(c, close(blend_factor(1.0e6, 0.0, scfg), 1.0), "blend upper clamp");
  expect(c, close(blend_factor(0.0, 0.0, scfg), 0.0), "blend lower clamp");

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> ad(-30.0, 30.0);
  std::uniform_real_distribution<double> vd(1.0, 60.0);
  std::uniform_real_distribution<double> fd(1.0e2, 2.0e4);
  std::uniform_real_distribution<double> sd(0.1, 10.0);
  std::uniform_real_distribution<double> pd(0.0, 2.0e6);
  EngineCharacteristics wide = maps;
  wide.torque_max_curve.y = {1.0e9};
  bool props = true;
  for (int i = 0; i < 1000; ++i) {
    const double v = vd(rng);
    const double a1 = ad(rng);
    const double a2 = ad(rng);
    // Additivity of the inertial term on top of the resistance offset.
    const double lhs = feedforward_force(a1 + a2, v, acfg, ex);
    const double rhs = feedforward_force(a1, v, acfg, ex) + feedforward_force(a2, v, acfg, ex) -
                       feedforward_force(0.0, v, acfg, ex);
    props = props && close(lhs, rhs);
    // Aerodynamic drag is homogeneous of degree two in speed.
    props = props && close(driving_resistances(2.0 * v, acfg, ex).F_aero,
                           4.0 * driving_resistances(v, acfg, ex).F_aero);
    // Pressure from force and torque from force are linear maps.
    const double F = fd(rng);
    const double s = sd(rng);
    props = props && close(axle_pressure_from_force(s * F, 0.3, ex),
                           s * axle_pressure_from_force(F, 0.3, ex));
    props = props && close(motor_torque_target(s * F, 1, 5000.0, fcfg, ex, wide),
                           s * motor_torque_target(F, 1, 5000.0, fcfg, ex, wide));
    // Blend factor stays in [0,1] and never drops when pressure rises.
    const double p1 = pd(rng);
    const double p2 = p1 + pd(rng);
    const double k1 = blend_factor(p1, ad(rng), scfg);
    const double k2 = blend_factor(p2, -1.0, scfg);
    props = props && k1 >= 0.0 && k1 <= 1.0 &&
            blend_factor(p2, -1.0, scfg) >= blend_factor(p1, -1.0, scfg) && k2 >= 0.0 &&
            k2 <= 1.0;
  }
  expect(c, props, "randomized homogeneity/linearity properties");

  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  expect(c, c.seconds < 1.0, fmt("oracle suite took %.3f s (limit 1 s)", c.seconds));
  return c;
}

// ---------------------------------------------------------------------------
// 2: straight-line braking on the low-grip surface, with and without the
//    anti-lock intervention.
// ---------------------------------------------------------------------------
Criterion criterion_abs() {
  Criterion c{2, "anti-lock braking efficacy"};
  const auto t0 = std::chrono::steady_clock::now();
  const double kSlipLockThreshold = 0.9;   // "wheels lock" evidence without ABS
  const double kSlipBound = 0.30;          // ABS keeps peak slip below this
  const double kStopSpeed = 2.0;           // [m/s] maneuver evaluated down to here
  const double kDistanceFactor = 1.15;     // vs the point-mass optimum

  auto braking_run = [&](bool abs_on, const char* label) {
    StackConfig stack = default_stack_config();
    ScenarioConfig scn = make_builtin_scenario("straight_brake", &stack);
    scn.abs_enabled = abs_on;
    return &record(label, scn, stack);
  };
  const RunResult* off = braking_run(false, "straight_brake_no_abs");
  const RunResult* on = braking_run(true, "straight_brake_abs");

  auto application_row = [](const Log& log) {
    for (std::size_t i = 0; i < log.size(); ++i) {
      if (log[i].p_meas_front > 1.0e5) return i;
    }
    return log.size();
  };

  // Without ABS a front wheel must lock within a second of pressure arriving.
  const std::size_t i_off = application_row(off->log);
  expect(c, i_off < off->log.size(), "no brake pressure arrived in the uncontrolled run");
  double worst_off = 0.0;
  for (std::size_t i = i_off; i < off->log.size() && off->log[i].t <= off->log[i_off].t + 1.0; ++i) {
    worst_off = std::max(worst_off, worst_front_slip_mag(off->log[i]));
  }
  expect(c, worst_off >= kSlipLockThreshold,
         fmt("front slip only reached %.2f without ABS (need >= %.2f)", worst_off,
             kSlipLockThreshold));

  // With ABS the slip magnitude stays bounded on all wheels until standstill.
  const std::size_t i_on = application_row(on->log);
  expect(c, i_on < on->log.size(), "no brake pressure arrived in the controlled run");
  double worst_on = 0.0;
  std::size_t i_stop = on->log.size();
  for (std::size_t i = 0; i < on->log.size(); ++i) {
    if (on->log[i].v_est <= kStopSpeed && i > i_on) {
      i_stop = i;
      break;
    }
    worst_on = std::max(worst_on, std::max(worst_front_slip_mag(on->log[i]),
                                           worst_rear_slip_mag(on->log[i])));
  }
  expect(c, worst_on <= kSlipBound,
         fmt("peak slip %.3f with ABS (bound %.2f)", worst_on, kSlipBound));
  expect(c, i_stop < on->log.size(), "the controlled run never slowed to the stop threshold");

  if (i_stop < on->log.size() && i_on < on->log.size()) {
    bool abs_seen = false;
    for (std::size_t i = i_on; i < i_stop; ++i) {
      abs_seen = abs_seen || on->log[i].abs_front != 0 || on->log[i].abs_rear != 0;
    }
    expect(c, abs_seen, "ABS never intervened in the controlled run");

    const StackConfig stack = g_runs.back().stack;  // straight_brake surface
    const double mu = stack.plant.tire_front.mu_road;
    const double actual = on->log[i_stop].distance - on->log[i_on].distance;
    const double ideal =
        ideal_braking_distance(on->log[i_on].v, on->log[i_stop].v, mu, stack.params);
    expect(c, actual <= kDistanceFactor * ideal,
           fmt("stopping distance %.1f m vs ideal %.1f m (factor %.3f)", actual, ideal,
               actual / ideal));
    c.notes.push_back(fmt("info: stop from %.1f m/s in %.1f m, ideal %.1f m",
                          on->log[i_on].v, actual, ideal));
  }

  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  expect(c, c.seconds < 10.0, fmt("braking runs took %.2f s (limit 10 s)", c.seconds));
  return c;
}

// ---------------------------------------------------------------------------
// 3: full-throttle launch on the slippery surface, with and without traction
//    control.
// ---------------------------------------------------------------------------
Criterion criterion_tc() {
  Criterion c{3, "traction control efficacy"};
  const auto t0 = std::chrono::steady_clock::now();

  auto launch_run = [&](bool tc_on, const char* label) {
    StackConfig stack = default_stack_config();
    ScenarioConfig scn = make_builtin_scenario("launch", &stack);
    scn.tc_enabled = tc_on;
    return &record(label, scn, stack);
  };
  const RunResult* off = launch_run(false, "launch_no_tc");
  const RunResult* on = launch_run(true, "launch_tc");
  const TcConfig tc = default_stack_config().tc;
  const double kSlipBound = tc.kappa_cut_upper + 0.05;

  double worst_off = 0.0;
  for (const LogRow& r : off->log) worst_off = std::max(worst_off, worst_rear_slip_mag(r));
  expect(c, worst_off > 0.5,
         fmt("rear slip only reached %.2f without TC (need > 0.50)", worst_off));

  std::size_t first = on->log.size();
  for (std::size_t i = 0; i < on->log.size(); ++i) {
    if (on->log[i].tc_active != 0) {
      first = i;
      break;
    }
  }
  expect(c, first < on->log.size(), "TC never intervened in the controlled launch");
  double worst_on = 0.0;
  for (std::size_t i = first + 1; i < on->log.size(); ++i) {
    worst_on = std::max(worst_on, worst_rear_slip_mag(on->log[i]));
  }
  expect(c, worst_on <= kSlipBound,
         fmt("rear slip %.3f after the first intervention (bound %.3f)", worst_on, kSlipBound));

  // The throttle must be zero on every tick whose worst rear drive slip
  // exceeds the cut threshold (same wheel selection as the controller).
  bool cut_ok = true;
  for (const LogRow& r : on->log) {
    const double worst =
        std::abs(r.kappa_rl) >= std::abs(r.kappa_rr) ? r.kappa_rl : r.kappa_rr;
    if (worst > tc.kappa_cut_upper && r.throttle != 0.0) cut_ok = false;
  }
  expect(c, cut_ok, "throttle was not cut while rear slip exceeded the cut threshold");

  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  expect(c, c.seconds < 10.0, fmt("launch runs took %.2f s (limit 10 s)", c.seconds));
  return c;
}

// ---------------------------------------------------------------------------
// 4: gear strategy comparison through the straight-into-corner scenario.
// ---------------------------------------------------------------------------
Criterion criterion_gear() {
  Criterion c{4, "predictive gear strategy"};
  const auto t0 = std::chrono::steady_clock::now();

  auto corner_run = [&](bool predictive, const char* label) {
    StackConfig stack = default_stack_config();
    ScenarioConfig scn = make_builtin_scenario("straight_corner", &stack);
    scn.predictive_gear = predictive;
    return &record(label, scn, stack);
  };
  const RunResult* conv = corner_run(false, "straight_corner_conventional");
  const RunResult* pred = corner_run(true, "straight_corner_predictive");

  int conv_downshifts_in_corner = 0;
  for (std::size_t i = 1; i < conv->log.size(); ++i) {
    if (conv->log[i].gear_request < conv->log[i - 1].gear_request &&
        std::abs(conv->log[i].a_y) > conv->log[i].ay_shift_limit) {
      ++conv_downshifts_in_corner;
    }
  }
  expect(c, conv_downshifts_in_corner >= 1,
         "the conventional strategy never downshifted inside the corner");
  expect(c, pred->metrics.shifts_during_high_ay == 0,
         fmt("the predictive strategy shifted %.0f times inside the corner",
             static_cast<double>(pred->metrics.shifts_during_high_ay)));

  // Both strategies must leave the corner in the same gear and at nearly the
  // same engine speed.
  const LogRow& conv_end = conv->log.back();
  const LogRow& pred_end = pred->log.back();
  expect(c, conv_end.gear_engaged == pred_end.gear_engaged,
         fmt("exit gear differs: conventional %.0f vs predictive %.0f",
             static_cast<double>(conv_end.gear_engaged),
             static_cast<double>(pred_end.gear_engaged)));
  const double rpm_rel = std::abs(pred_end.engine_rpm - conv_end.engine_rpm) /
                         std::max(1.0, conv_end.engine_rpm);
  expect(c, rpm_rel <= 0.05, fmt("exit rpm differs by %.1f%% (limit 5%%)", 100.0 * rpm_rel));
  c.notes.push_back(fmt("info: exit gear %.0f, rpm delta %.1f%%",
                        static_cast<double>(pred_end.gear_engaged), 100.0 * rpm_rel));

  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return c;
}

// ---------------------------------------------------------------------------
// 5: chicane tracking, hydraulic-free coasting, and the bounded turbo-lag
//    shortfall.
// ---------------------------------------------------------------------------
Criterion criterion_chicane() {
  Criterion c{5, "chicane acceleration tracking"};
  const auto t0 = std::chrono::steady_clock::now();

  StackConfig stack = default_stack_config();
  ScenarioConfig scn = make_builtin_scenario("chicane", &stack);
  const RunResult& run = record("chicane", scn, stack);

  expect(c, run.metrics.rms_ax_error <= 1.0,
         fmt("braking-phase RMS acceleration error %.3f m/s^2 (limit 1.0)",
             run.metrics.rms_ax_error));

  // Wherever the demanded deceleration stays weaker than what engine drag,
  // air drag and rolling resistance deliver (with the mode-hysteresis margin,
  // sustained for 0.1 s), the hydraulics must stay at the warmup level.
  int sustained = 0;
  int coast_rows = 0;
  bool coast_ok = true;
  for (const LogRow& r : run.log) {
    const DrivingResistances res = driving_resistances(r.v_est, stack.accel, stack.params);
    const double drag =
        drag_brake_force(r.engine_rpm, r.gear_engaged, 0.0, stack.params, stack.engine);
    const double capability = res.F_aero + res.F_roll + drag;
    const bool coasting =
        r.F_x_target < 0.0 && std::abs(r.F_x_target) < capability - stack.force.coast_band;
    sustained = coasting ? sustained + 1 : 0;
    if (sustained >= 100) {
      ++coast_rows;
      if (r.p_hyd_front > r.warmup_pressure + 1.0 || r.p_hyd_rear > r.warmup_pressure + 1.0) {
        coast_ok = false;
      }
    }
  }
  expect(c, coast_rows >= 200, fmt("only %.0f sustained coast ticks found (need >= 200)",
                                   static_cast<double>(coast_rows)));
  expect(c, coast_ok, "hydraulic pressure above the warmup level during engine-drag coasting");

  // Turbo lag: the plan may outrun the car during spool-up, but only by a
  // bounded margin, and the gap must close by the end of the scenario.
  double worst_shortfall = 0.0;
  for (const LogRow& r : run.log) {
    worst_shortfall = std::max(worst_shortfall, r.v_target - r.v);
  }
  expect(c, worst_shortfall <= 2.0,
         fmt("velocity shortfall peaked at %.2f m/s (limit 2.0)", worst_shortfall));
  const double final_err = std::abs(run.log.back().v_target - run.log.back().v);
  expect(c, final_err <= 1.0,
         fmt("velocity error still %.2f m/s at the end (limit 1.0)", final_err));
  c.notes.push_back(fmt("info: rms %.3f m/s^2, shortfall %.2f m/s, %.0f coast ticks",
                        run.metrics.rms_ax_error, worst_shortfall,
                        static_cast<double>(coast_rows)));

  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return c;
}

// ---------------------------------------------------------------------------
// 6: disc warmup reaches its temperature target inside the lap budget, and
//    merging never reduces a braking command anywhere in the recorded logs.
// ---------------------------------------------------------------------------
Criterion criterion_warmup() {
  Criterion c{6, "brake warmup"};
  const auto t0 = std::chrono::steady_clock::now();

  StackConfig stack = default_stack_config();
  ScenarioConfig scn = make_builtin_scenario("warmup_laps", &stack);
  const RunResult& run = record("warmup_laps", scn, stack);

  expect(c, run.metrics.time_to_disc_temp >= 0.0,
         fmt("front disc never reached %.0f degC (max %.0f)", stack.warmup.temp_target,
             run.metrics.max_disc_temp_front));
  if (run.metrics.time_to_disc_temp >= 0.0) {
    int lap_at_target = 0;
    for (const LogRow& r : run.log) {
      if (r.t >= run.metrics.time_to_disc_temp) {
        lap_at_target = r.lap_count;
        break;
      }
    }
    expect(c, lap_at_target < stack.warmup.max_laps,
           fmt("target reached on lap %.0f, budget %.0f laps",
               static_cast<double>(lap_at_target), static_cast<double>(stack.warmup.max_laps)));
    c.notes.push_back(fmt("info: %.0f degC after %.1f s (lap %.0f)", stack.warmup.temp_target,
                          run.metrics.time_to_disc_temp, static_cast<double>(lap_at_target)));
  }

  // Merge property across every log recorded so far (including this one).
  bool merge_ok = true;
  for (const RecordedRun& rr : g_runs) {
    for (const LogRow& r : rr.log) {
      if (r.p_merged_front < r.p_hyd_front - 1e-9 || r.p_merged_rear < r.p_hyd_rear - 1e-9) {
        merge_ok = false;
      }
    }
  }
  expect(c, merge_ok, "a merged pressure fell below its braking target");

  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return c;
}

// ---------------------------------------------------------------------------
// 7: brake pressure loop: step response on the matched model, robustness to a
//    dead-time mismatch, and exact reduction to the plain cascade.
// ---------------------------------------------------------------------------

// Cascade without the dead-time compensation terms (same scheduling, same
// PI templates, unity feedforward) used as the reduction reference.
struct PlainCascade {
  PidState outer;
  PidState inner;
  double prev_target{0.0};
  double prev_meas{0.0};
  bool have_prev{false};
  double rate_filtered{0.0};
  bool transient{false};

  double step(double p_target, double p_meas, double dt, const BpcConfig& cfg) {
    const double gradient = std::abs(p_target - prev_target) / dt;
    if (transient) {
      if (gradient < 0.9 * cfg.gradient_threshold) transient = false;
    } else {
      if (gradient > 1.1 * cfg.gradient_threshold) transient = true;
    }
    const BpcGainSet& g = transient ? cfg.gains_transient : cfg.gains_steady;
    PidConfig oc = cfg.outer_pi;
    oc.kp = g.outer_kp;
    oc.ki = g.outer_ki;
    oc.kd = 0.0;
    PidConfig ic = cfg.inner_pi;
    ic.kp = g.inner_kp;
    ic.ki = g.inner_ki;
    ic.kd = 0.0;
    const double rate_sp = pid_step(outer, oc, p_target - p_meas, dt);
    const double rate_raw = have_prev ? (p_meas - prev_meas) / dt : 0.0;
    rate_filtered = lowpass_step(rate_filtered, rate_raw, cfg.rate_filter_tau, dt);
    const double delta = pid_step(inner, ic, rate_sp - rate_filtered, dt);
    prev_target = p_target;
    prev_meas = p_meas;
    have_prev = true;
    return std::clamp(p_target + delta, cfg.p_command_min, cfg.p_command_max);
  }
};

// First-order brake line with transport delay, discretized exactly like the
// controller's internal model.
struct BrakeLine {
  double tau;
  std::vector<double> ring;
  std::size_t head{0};
  double lag{0.0};

  BrakeLine(double tau_s, double deadtime_s, double dt)
      : tau(tau_s), ring(static_cast<std::size_t>(std::lround(deadtime_s / dt)), 0.0) {}

  double measure() const { return ring.empty() ? lag : ring[head]; }

  void apply(double command, double dt) {
    lag += dt / tau * (command - lag);
    if (!ring.empty()) {
      ring[head] = lag;
      head = (head + 1) % ring.size();
    }
  }
};

Criterion criterion_pressure_loop() {
  Criterion c{7, "brake pressure loop"};
  const auto t0 = std::chrono::steady_clock::now();
  const double kDt = 0.001;
  const BpcConfig cfg;

  // Matched model: measured plant identical to the internal model.
  {
    BpcState st;
    BrakeLine line(cfg.plant_model_tau, cfg.plant_model_deadtime, kDt);
    const double target = 2.0e6;
    const double t_step = 0.1;
    double max_meas = 0.0;
    double t_rise = -1.0;
    for (int k = 0; k < 3000; ++k) {
      const double t = k * kDt;
      const double sp = t >= t_step ? target : 0.0;
      const double cmd = bpc_step(sp, line.measure(), kDt, cfg, st);
      line.apply(cmd, kDt);
      const double meas = line.measure();
      max_meas = std::max(max_meas, meas);
      if (t_rise < 0.0 && meas >= 0.9 * target) t_rise = t - t_step;
    }
    const double overshoot = (max_meas - target) / target;
    expect(c, overshoot < 0.10, fmt("step overshoot %.1f%% (limit 10%%)", 100.0 * overshoot));
    expect(c, t_rise >= 0.0 && t_rise < 0.25,
           fmt("90%% rise time %.3f s (limit 0.25 s)", t_rise));
    c.notes.push_back(fmt("info: overshoot %.1f%%, rise %.3f s", 100.0 * overshoot, t_rise));
  }

  // +20% dead time in the real line, unchanged internal model.
  {
    BpcState st;
    BrakeLine line(cfg.plant_model_tau, 1.2 * cfg.plant_model_deadtime, kDt);
    const double target = 2.0e6;
    bool bounded = true;
    double tail_sum = 0.0;
    int tail_n = 0;
    for (int k = 0; k < 5000; ++k) {
      const double cmd = bpc_step(target, line.measure(), kDt, cfg, st);
      line.apply(cmd, kDt);
      const double meas = line.measure();
      bounded = bounded && std::isfinite(meas) && meas >= 0.0 && meas <= 2.0 * target;
      if (k >= 4000) {
        tail_sum += meas;
        ++tail_n;
      }
    }
    const double tail_mean = tail_sum / tail_n;
    expect(c, bounded, "response left [0, 2x target] under the dead-time mismatch");
    expect(c, std::abs(tail_mean - target) <= 0.15 * target,
           fmt("mismatched loop settled at %.2f of the target", tail_mean / target));
  }

  // Dead time zero: the compensation terms cancel and the controller must
  // match the plain cascade step for step.
  {
    BpcConfig zero = cfg;
    zero.plant_model_deadtime = 0.0;
    BpcState st;
    PlainCascade plain;
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> jitter(-2.0e5, 2.0e5);
    double meas = 0.0;
    bool equal = true;
    for (int k = 0; k < 3000; ++k) {
      const double t = k * kDt;
      double target = 0.0;
      if (t > 0.2) target = 8.0e6;
      if (t > 1.0) target = 8.0e6 + 6.0e6 * std::sin(2.0 * kPi * 1.5 * (t - 1.0));
      if (t > 2.5) target = 1.0e6;
      const double a = bpc_step(target, meas, kDt, zero, st);
      const double b = plain.step(target, meas, kDt, zero);
      equal = equal && std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a));
      meas += kDt / 0.05 * (a - meas);
      if (k % 7 == 0) meas = std::max(0.0, meas + jitter(rng));
    }
    expect(c, equal, "zero-dead-time controller diverged from the plain cascade");
  }

  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return c;
}

// ---------------------------------------------------------------------------
// 8: bit-exact replay under a fixed seed and first-order convergence in the
//    integration step.
// ---------------------------------------------------------------------------
Criterion criterion_determinism() {
  Criterion c{8, "determinism and convergence"};
  const auto t0 = std::chrono::steady_clock::now();

  // Same seed, sensor noise enabled: the exported time series must be
  // byte-identical.
  {
    StackConfig stack = default_stack_config();
    ScenarioConfig scn = make_builtin_scenario("chicane", &stack);
    stack.plant.noise.std_v = 0.05;
    stack.plant.noise.std_a_x = 0.05;
    stack.plant.noise.std_wheel_speed = 0.1;
    stack.plant.noise.std_pressure = 1.0e3;
    const RunResult a = run_scenario(scn, stack);
    const RunResult b = run_scenario(scn, stack);
    const auto pa = std::filesystem::temp_directory_path() / "acceptance_run_a.csv";
    const auto pb = std::filesystem::temp_directory_path() / "acceptance_run_b.csv";
    write_timeseries_csv(pa.string(), a.log);
    write_timeseries_csv(pb.string(), b.log);
    auto slurp = [](const std::filesystem::path& p) {
      std::ifstream in(p, std::ios::binary);
      std::ostringstream ss;
      ss << in.rdbuf();
      return ss.str();
    };
    const bool identical = slurp(pa) == slurp(pb);
    std::filesystem::remove(pa);
    std::filesystem::remove(pb);
    expect(c, identical, "same-seed runs produced different time series files");
  }

  // Noise-free chicane at 1 kHz vs 2 kHz plant integration.
  {
    StackConfig stack = default_stack_config();
    ScenarioConfig scn = make_builtin_scenario("chicane", &stack);
    const RunResult coarse = record("chicane_dt_1ms", scn, stack);
    ScenarioConfig fine_scn = scn;
    fine_scn.rates.plant = 2000.0;
    const RunResult fine = record("chicane_dt_0p5ms", fine_scn, stack);
    const double rel = std::abs(fine.metrics.final_v - coarse.metrics.final_v) /
                       std::max(1.0, std::abs(coarse.metrics.final_v));
    expect(c, rel < 0.005,
           fmt("final velocity moved %.3f%% when halving the step (limit 0.5%%)", 100.0 * rel));
    c.notes.push_back(fmt("info: final v %.3f vs %.3f m/s", coarse.metrics.final_v,
                          fine.metrics.final_v));
  }

  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return c;
}

// ---------------------------------------------------------------------------
// 9: hard safety invariants over every log recorded above, plus the replay
//    test that the ABS output ignores the upstream target while active.
// ---------------------------------------------------------------------------
Criterion criterion_safety() {
  Criterion c{9, "global safety invariants"};
  const auto t0 = std::chrono::steady_clock::now();

  for (const RecordedRun& rr : g_runs) {
    const auto violations = check_safety_invariants(rr.log, rr.stack, rr.predictive);
    expect(c, violations.empty(),
           "safety violation in " + rr.label + (violations.empty() ? "" : ": " + violations[0]));
    // Traction control may only ever add rear pressure. Whenever the rear
    // anti-lock channel is idle the stability output must dominate its input.
    for (const LogRow& r : rr.log) {
      if (r.tc_active != 0 && r.abs_rear == 0 &&
          r.p_target_rear < r.p_merged_rear - 1e-9) {
        expect(c, false, "traction control reduced rear pressure in " + rr.label);
        break;
      }
    }
  }
  c.notes.push_back(fmt("info: checked %.0f logs", static_cast<double>(g_runs.size())));

  // Perturbation replay: while the anti-lock channel is active, two different
  // upstream targets (both above the decayed ceiling) must yield bit-equal
  // outputs and states.
  {
    const AbsConfig cfg;
    StabilityState st;
    const double dt = 0.01;
    abs_step(6.0e6, -0.2, -5.0e3, 30.0, dt, cfg, st);
    expect(c, st.mode == StabilityMode::kActive, "ABS did not activate for the replay test");
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> kd(-0.35, -0.02);
    std::uniform_real_distribution<double> vd(5.0, 40.0);
    std::uniform_real_distribution<double> Fd(-8.0e3, -2.5e3);
    bool independent = true;
    for (int i = 0; i < 200 && st.mode == StabilityMode::kActive; ++i) {
      const double kappa = kd(rng);
      const double v = vd(rng);
      const double F = Fd(rng);
      StabilityState sa = st;
      StabilityState sb = st;
      const double p1 = st.p_max_latched * 1.01;
      const double p2 = st.p_max_latched * 5.0;
      const double o1 = abs_step(p1, kappa, F, v, dt, cfg, sa);
      const double o2 = abs_step(p2, kappa, F, v, dt, cfg, sb);
      independent = independent && o1 == o2 && sa.rho == sb.rho &&
                    sa.p_max_latched == sb.p_max_latched && sa.mode == sb.mode;
      st = sa;
    }
    expect(c, independent, "ABS output depended on the upstream target while active");
  }

  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return c;
}

}  // namespace

int main() {
  std::printf("acceptance gate: longitudinal control stack\n");
  std::vector<Criterion> results;
  auto run = [&](Criterion (*fn)(), int id, const char* name) {
    Criterion c;
    try {
      c = fn();
    } catch (const std::exception& e) {
      c.id = id;
      c.name = name;
      c.pass = false;
      c.notes.push_back(std::string("exception: ") + e.what());
    }
    results.push_back(c);
  };

  run(&criterion_equations, 1, "equation oracles and randomized properties");
  run(&criterion_abs, 2, "anti-lock braking efficacy");
  run(&criterion_tc, 3, "traction control efficacy");
  run(&criterion_gear, 4, "predictive gear strategy");
  run(&criterion_chicane, 5, "chicane acceleration tracking");
  run(&criterion_warmup, 6, "brake warmup");
  run(&criterion_pressure_loop, 7, "brake pressure loop");
  run(&criterion_determinism, 8, "determinism and convergence");
  run(&criterion_safety, 9, "global safety invariants");

  int passed = 0;
  for (const Criterion& c : results) {
    std::printf("[%s] %d %s (%.2f s)\n", c.pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                c.seconds);
    for (const std::string& n : c.notes) {
      std::printf("       - %s\n", n.c_str());
    }
    if (c.pass) ++passed;
  }
  std::printf("RESULT: %d/%d criteria passed\n", passed, static_cast<int>(results.size()));
  return passed == static_cast<int>(results.size()) ? 0 : 1;
}
