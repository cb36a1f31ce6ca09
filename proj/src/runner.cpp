#include "longctrl/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

#include "longctrl/accel_controller.hpp"
#include "longctrl/brake_pressure_controller.hpp"
#include "longctrl/brake_warmup.hpp"
#include "longctrl/force_controller.hpp"
#include "longctrl/gear_shift.hpp"
#include "longctrl/plant.hpp"
#include "longctrl/slip_estimation.hpp"
#include "longctrl/stability_controller.hpp"

namespace longctrl {

namespace {

constexpr double kPreviewDt = 0.05;  // [s] gear-shift preview sampling

Trajectory build_preview(const Profile& profile, double t_now, double horizon) {
  Trajectory traj;
  const int n = static_cast<int>(horizon / kPreviewDt) + 1;
  traj.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double offset = i * kPreviewDt;
    const ProfilePoint p = sample_profile(profile, t_now + offset);
    traj.push_back({offset, p.v, p.a_y, p.a_x});
  }
  return traj;
}

VehicleState initial_snapshot(const ScenarioConfig& scn, const StackConfig& stack) {
  VehicleState vs;
  vs.t = 0.0;
  vs.v_est = scn.v0;
  vs.wheel_speed[0] = vs.wheel_speed[1] = scn.v0 / stack.params.r_wheel_front;
  vs.wheel_speed[2] = vs.wheel_speed[3] = scn.v0 / stack.params.r_wheel_rear;
  vs.engine_speed = std::max(stack.params.idle_speed,
                             engine_speed_from_velocity(scn.v0, scn.gear0, stack.params));
  vs.gear_engaged = scn.gear0;
  vs.disc_temp_front = stack.plant.ambient_temp;
  vs.disc_temp_rear = stack.plant.ambient_temp;
  return vs;
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& scenario, const StackConfig& stack_in) {
  scenario.validate();
  StackConfig stack = stack_in;
  stack.plant.integration_dt = 1.0 / scenario.rates.plant;
  stack.validate();

  GearShiftConfig gear_cfg = stack.gear;
  gear_cfg.predictive = scenario.predictive_gear;

  Plant plant(stack.plant, stack.params, scenario.seed);
  plant.init(scenario.v0, scenario.gear0);

  SlipEstimator slip(stack.slip, stack.params);
  AccelController accel(stack.accel, stack.params);
  ForceController force(stack.force, stack.params, stack.engine);
  StabilityController stability(stack.abs, stack.tc, scenario.abs_enabled, scenario.tc_enabled);
  BrakeWarmup warmup(stack.warmup);
  GearShiftState gear_state;
  gear_state.current_request = scenario.gear0;
  BpcState bpc_front;
  BpcState bpc_rear;

  const double dt_plant = 1.0 / scenario.rates.plant;
  const double dt_long = 1.0 / scenario.rates.longitudinal;
  const double dt_bpc = 1.0 / scenario.rates.bpc;
  const auto n_gear = static_cast<long>(std::lround(scenario.rates.plant / scenario.rates.gear));
  const auto n_warmup =
      static_cast<long>(std::lround(scenario.rates.plant / scenario.rates.warmup));
  const auto n_long =
      static_cast<long>(std::lround(scenario.rates.plant / scenario.rates.longitudinal));
  const auto n_bpc = static_cast<long>(std::lround(scenario.rates.plant / scenario.rates.bpc));
  const auto n_ticks = static_cast<long>(std::lround(scenario.duration * scenario.rates.plant));

  VehicleState vs = initial_snapshot(scenario, stack);

  // Zero-order-hold latches between module rates.
  int gear_request = scenario.gear0;
  double warmup_pressure = 0.0;
  SlipEstimate slip_est;
  slip_est.v_blend = scenario.v0;
  double a_x_target = 0.0;
  double F_x_target = 0.0;
  ForceCtrlOutput fc_out;
  StabilityOutput stab_out;
  double p_cmd_front = 0.0;
  double p_cmd_rear = 0.0;

  RunResult result;
  result.log.reserve(static_cast<std::size_t>(n_ticks));

  for (long tick = 0; tick < n_ticks; ++tick) {
    const double t_now = tick * dt_plant;
    const ProfilePoint ref = sample_profile(scenario.profile, t_now);

    if (tick % n_gear == 0) {
      const Trajectory preview = build_preview(scenario.profile, t_now, gear_cfg.horizon_length);
      gear_request = decide_gear(gear_state, vs, preview, gear_cfg, stack.params);
    }
    if (tick % n_warmup == 0) {
      warmup_pressure = scenario.warmup_enabled
                            ? warmup.pressure(ref.a_y, vs.disc_temp_front, vs.lap_count)
                            : 0.0;
    }
    if (tick % n_long == 0) {
      slip_est = slip.estimate(vs, dt_long);
      a_x_target = ref.a_x + scenario.velocity_tracking_gain * (ref.v - vs.v_est);
      F_x_target = accel.step(AccelCommand{a_x_target}, vs, dt_long);
      fc_out = force.step(F_x_target, vs, warmup_pressure, a_x_target, dt_long);
      // Saturate the hydraulic demand to the actuator range before anything
      // downstream sees it; the force controller itself is unbounded.
      const auto sat = [&](double p) {
        return std::clamp(p, stack.bpc.p_command_min, stack.bpc.p_command_max);
      };
      fc_out.p_hyd_front = sat(fc_out.p_hyd_front);
      fc_out.p_hyd_rear = sat(fc_out.p_hyd_rear);
      fc_out.p_front = sat(fc_out.p_front);
      fc_out.p_rear = sat(fc_out.p_rear);
      StabilityInput stab_in;
      stab_in.throttle_in = fc_out.throttle;
      stab_in.p_front_in = fc_out.p_front;
      stab_in.p_rear_in = fc_out.p_rear;
      stab_in.kappa = slip_est.kappa;
      stab_in.F_x_est = stack.params.m * vs.a_x_meas;
      stab_in.v = vs.v_est;
      stab_in.braking = fc_out.brake_mode;
      stab_out = stability.step(stab_in, dt_long);
      stab_out.p_front_out = sat(stab_out.p_front_out);
      stab_out.p_rear_out = sat(stab_out.p_rear_out);
    }
    if (tick % n_bpc == 0) {
      p_cmd_front = bpc_step(stab_out.p_front_out, vs.p_brake_meas_front, dt_bpc, stack.bpc,
                             bpc_front);
      p_cmd_rear = bpc_step(stab_out.p_rear_out, vs.p_brake_meas_rear, dt_bpc, stack.bpc,
                            bpc_rear);
    }

    ActuationCommand cmd;
    cmd.throttle = stab_out.throttle_out;
    cmd.p_brake_target_front = p_cmd_front;
    cmd.p_brake_target_rear = p_cmd_rear;
    cmd.gear_request = gear_request;

    const double yaw_rate = ref.a_y / std::max(ref.v, 1.0);
    vs = plant.step(cmd, yaw_rate, ref.a_y);

    LogRow row;
    row.t = vs.t;
    row.v = plant.state().v;
    row.v_target = ref.v;
    row.v_est = vs.v_est;
    row.v_blend = slip_est.v_blend;
    row.a_x = plant.state().a_x;
    row.a_x_target = a_x_target;
    row.a_x_planned = ref.a_x;
    row.a_y = ref.a_y;
    row.yaw_rate = yaw_rate;
    row.F_x_target = F_x_target;
    row.throttle = cmd.throttle;
    row.p_hyd_front = fc_out.p_hyd_front;
    row.p_hyd_rear = fc_out.p_hyd_rear;
    row.p_merged_front = fc_out.p_front;
    row.p_merged_rear = fc_out.p_rear;
    row.p_target_front = stab_out.p_front_out;
    row.p_target_rear = stab_out.p_rear_out;
    row.p_cmd_front = p_cmd_front;
    row.p_cmd_rear = p_cmd_rear;
    row.p_meas_front = vs.p_brake_meas_front;
    row.p_meas_rear = vs.p_brake_meas_rear;
    row.warmup_pressure = warmup_pressure;
    row.gear_engaged = vs.gear_engaged;
    row.gear_request = gear_request;
    row.engine_rpm = vs.engine_speed;
    row.kappa_fl = slip_est.kappa[0];
    row.kappa_fr = slip_est.kappa[1];
    row.kappa_rl = slip_est.kappa[2];
    row.kappa_rr = slip_est.kappa[3];
    row.k_blend = slip.state().k_filtered;
    row.brake_mode = fc_out.brake_mode ? 1 : 0;
    row.abs_front = stab_out.abs_active_front ? 1 : 0;
    row.abs_rear = stab_out.abs_active_rear ? 1 : 0;
    row.tc_active = stab_out.tc_active ? 1 : 0;
    row.tc_p_added = stab_out.tc_p_added;
    row.disc_temp_front = vs.disc_temp_front;
    row.disc_temp_rear = vs.disc_temp_rear;
    row.lap_count = vs.lap_count;
    row.distance = plant.state().distance;
    row.ay_shift_limit = stack.gear.ay_limit_table.eval(vs.v_est);
    result.log.push_back(row);
  }

  result.metrics = compute_metrics(result.log, MetricsOptions{-3.0, stack.warmup.temp_target});
  return result;
}

Metrics compute_metrics(const Log& log, const MetricsOptions& opts) {
  if (log.empty()) throw std::invalid_argument("compute_metrics: empty log");
  Metrics m;
  double sum_ax2 = 0.0;
  long n_ax = 0;
  double sum_v2 = 0.0;
  bool abs_open = false;
  bool tc_open = false;
  for (std::size_t i = 0; i < log.size(); ++i) {
    const LogRow& row = log[i];
    if (row.a_x_planned <= opts.braking_mask_ax_below) {
      const double e = row.a_x - row.a_x_target;
      sum_ax2 += e * e;
      ++n_ax;
    }
    const double ev = row.v - row.v_target;
    sum_v2 += ev * ev;
    const double slips[4] = {row.kappa_fl, row.kappa_fr, row.kappa_rl, row.kappa_rr};
    for (int w = 0; w < 4; ++w) {
      m.max_abs_slip[w] = std::max(m.max_abs_slip[w], std::abs(slips[w]));
    }
    if (i > 0 && row.gear_request != log[i - 1].gear_request &&
        std::abs(row.a_y) > row.ay_shift_limit) {
      ++m.shifts_during_high_ay;
    }
    if (m.time_to_disc_temp < 0.0 && row.disc_temp_front >= opts.disc_temp_target) {
      m.time_to_disc_temp = row.t;
    }
    const bool abs_now = row.abs_front != 0 || row.abs_rear != 0;
    if (abs_now && !abs_open) {
      m.abs_windows.push_back({row.t, row.t});
      abs_open = true;
    } else if (abs_now) {
      m.abs_windows.back().t_end = row.t;
    } else {
      abs_open = false;
    }
    const bool tc_now = row.tc_active != 0;
    if (tc_now && !tc_open) {
      m.tc_windows.push_back({row.t, row.t});
      tc_open = true;
    } else if (tc_now) {
      m.tc_windows.back().t_end = row.t;
    } else {
      tc_open = false;
    }
    m.max_disc_temp_front = std::max(m.max_disc_temp_front, row.disc_temp_front);
    m.max_disc_temp_rear = std::max(m.max_disc_temp_rear, row.disc_temp_rear);
  }
  m.rms_ax_error = n_ax > 0 ? std::sqrt(sum_ax2 / n_ax) : 0.0;
  m.rms_v_error = std::sqrt(sum_v2 / static_cast<double>(log.size()));
  m.final_v = log.back().v;
  m.distance = log.back().distance;
  return m;
}

std::vector<std::string> check_safety_invariants(const Log& log, const StackConfig& stack,
                                                 bool predictive_gear) {
  std::vector<std::string> violations;
  auto report = [&](double t, const std::string& what) {
    if (violations.size() < 20) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "t=%.3f: ", t);
      violations.push_back(buf + what);
    }
  };
  const double p_max = stack.bpc.p_command_max;
  for (std::size_t i = 0; i < log.size(); ++i) {
    const LogRow& r = log[i];
    if (!(r.throttle >= 0.0 && r.throttle <= 1.0)) report(r.t, "throttle outside [0,1]");
    const double pressures[] = {r.p_hyd_front,    r.p_hyd_rear,    r.p_merged_front,
                                r.p_merged_rear,  r.p_target_front, r.p_target_rear,
                                r.p_cmd_front,    r.p_cmd_rear};
    for (double p : pressures) {
      if (!(p >= 0.0 && p <= p_max)) {
        report(r.t, "brake pressure outside [0, max]");
        break;
      }
    }
    if (!(r.k_blend >= 0.0 && r.k_blend <= 1.0)) report(r.t, "velocity blend factor outside [0,1]");
    if (r.tc_p_added < 0.0) report(r.t, "traction control reduced rear pressure");
    if (r.p_merged_front < r.p_hyd_front - 1e-9 || r.p_merged_rear < r.p_hyd_rear - 1e-9) {
      report(r.t, "warmup merge below braking target");
    }
    if (r.gear_request < 1 || r.gear_request > stack.params.gear_count()) {
      report(r.t, "gear request out of range");
    }
    if (predictive_gear && i > 0 && r.gear_request != log[i - 1].gear_request &&
        std::abs(r.a_y) > r.ay_shift_limit) {
      report(r.t, "gear shift during high lateral acceleration");
    }
  }
  return violations;
}

void write_timeseries_csv(const std::string& path, const Log& log) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "t,v,v_target,v_est,v_blend,a_x,a_x_target,a_x_planned,a_y,yaw_rate,F_x_target,"
         "throttle,p_hyd_front,p_hyd_rear,p_merged_front,p_merged_rear,p_target_front,"
         "p_target_rear,p_cmd_front,p_cmd_rear,p_meas_front,p_meas_rear,warmup_pressure,"
         "gear_engaged,gear_request,engine_rpm,kappa_fl,kappa_fr,kappa_rl,kappa_rr,k_blend,"
         "brake_mode,abs_front,abs_rear,tc_active,tc_p_added,disc_temp_front,disc_temp_rear,"
         "lap_count,distance,ay_shift_limit\n";
  char buf[1024];
  for (const LogRow& r : log) {
    std::snprintf(
        buf, sizeof(buf),
        "%.6f,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,"
        "%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,"
        "%d,%d,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%d,%d,%d,%d,%.10g,%.10g,%.10g,%d,%.10g,%.10g\n",
        r.t, r.v, r.v_target, r.v_est, r.v_blend, r.a_x, r.a_x_target, r.a_x_planned, r.a_y,
        r.yaw_rate, r.F_x_target, r.throttle, r.p_hyd_front, r.p_hyd_rear, r.p_merged_front,
        r.p_merged_rear, r.p_target_front, r.p_target_rear, r.p_cmd_front, r.p_cmd_rear,
        r.p_meas_front, r.p_meas_rear, r.warmup_pressure, r.gear_engaged, r.gear_request,
        r.engine_rpm, r.kappa_fl, r.kappa_fr, r.kappa_rl, r.kappa_rr, r.k_blend, r.brake_mode,
        r.abs_front, r.abs_rear, r.tc_active, r.tc_p_added, r.disc_temp_front, r.disc_temp_rear,
        r.lap_count, r.distance, r.ay_shift_limit);
    out << buf;
  }
}

void write_metrics_json(const std::string& path, const Metrics& metrics,
                        const std::vector<std::string>& violations) {
  nlohmann::ordered_json j;
  j["rms_ax_error"] = metrics.rms_ax_error;
  j["rms_v_error"] = metrics.rms_v_error;
  j["max_abs_slip"] = metrics.max_abs_slip;
  j["shifts_during_high_ay"] = metrics.shifts_during_high_ay;
  if (metrics.time_to_disc_temp >= 0.0) {
    j["time_to_disc_temp"] = metrics.time_to_disc_temp;
  } else {
    j["time_to_disc_temp"] = nullptr;
  }
  auto windows = [](const std::vector<InterventionWindow>& w) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const InterventionWindow& iw : w) arr.push_back({iw.t_start, iw.t_end});
    return arr;
  };
  j["abs_windows"] = windows(metrics.abs_windows);
  j["tc_windows"] = windows(metrics.tc_windows);
  j["final_v"] = metrics.final_v;
  j["distance"] = metrics.distance;
  j["max_disc_temp_front"] = metrics.max_disc_temp_front;
  j["max_disc_temp_rear"] = metrics.max_disc_temp_rear;
  j["violations"] = violations;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace longctrl
