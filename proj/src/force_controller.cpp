#include "longctrl/force_controller.hpp"

#include <algorithm>
#include <cmath>

namespace longctrl {

void EngineCharacteristics::validate() const {
  throttle_map.validate("engine.throttle_map");
  drag_torque_curve.validate("engine.drag_torque_curve");
  torque_max_curve.validate("engine.torque_max_curve");
  for (double v : drag_torque_curve.y) {
    if (v < 0.0) throw ConfigError("engine.drag_torque_curve: values must be >= 0");
  }
}

void ForceCtrlConfig::validate() const {
  if (coast_band < 0.0) throw ConfigError("force_controller.coast_band: must be >= 0");
  if (stall_guard_rpm < 0.0) throw ConfigError("force_controller.stall_guard_rpm: must be >= 0");
  if (idle_torque_min < 0.0) throw ConfigError("force_controller.idle_torque_min: must be >= 0");
}

double motor_torque_target(double F_x_target, int gear, double engine_speed_rpm,
                           const ForceCtrlConfig& cfg, const VehicleParams& params,
                           const EngineCharacteristics& maps) {
  const double ratio = gear_ratio(params, gear);
  double T = params.r_wheel_rear / (ratio * params.tau_final_drive * params.eta_drivetrain) *
             F_x_target;
  if (engine_speed_rpm > params.rev_limit) {
    T = std::min(T, 0.0);
  } else if (engine_speed_rpm < cfg.stall_guard_rpm) {
    T = std::max(T, cfg.idle_torque_min);
  }
  return std::clamp(T, 0.0, maps.torque_max_curve.eval(engine_speed_rpm));
}

double throttle_from_torque(double T_target, double engine_speed_rpm, double a_x_target,
                            double a_x_meas, double dt, const ForceCtrlConfig& cfg,
                            const EngineCharacteristics& maps, PidState& trim_state) {
  const double base = maps.throttle_map.eval(T_target, engine_speed_rpm);
  const double trim = pid_step(trim_state, cfg.throttle_pid, a_x_target - a_x_meas, dt);
  return clamp01(base + trim);
}

double drag_brake_force(double engine_speed_rpm, int gear, double throttle,
                        const VehicleParams& params, const EngineCharacteristics& maps) {
  const double ratio = gear_ratio(params, gear);  // throws on invalid gear
  const double T_drag = maps.drag_torque_curve.eval(engine_speed_rpm);
  // Throttle opening at which the engine produces zero net torque; above it
  // there is no drag braking. The drag share fades linearly in between.
  const double thr_zero = maps.throttle_map.eval(0.0, engine_speed_rpm);
  double fade = 1.0;
  if (thr_zero > 1e-9) fade = std::clamp(1.0 - throttle / thr_zero, 0.0, 1.0);
  return T_drag * fade * ratio * params.tau_final_drive / params.r_wheel_rear;
}

double brake_geometry_factor(const VehicleParams& params) {
  const double piston_area = kPi * (params.d_bore / 2.0) * (params.d_bore / 2.0);
  return 2.0 * piston_area * params.mu_brake * params.r_lever;
}

double axle_pressure_from_force(double F_axle, double r_wheel, const VehicleParams& params) {
  return F_axle * r_wheel / brake_geometry_factor(params);
}

AxlePressures brake_pressure_targets(double F_x_target, double drag_force,
                                     const VehicleParams& params) {
  AxlePressures out;
  const double F_total = std::max(0.0, -F_x_target);
  const double F_hyd = std::max(0.0, F_total - std::max(0.0, drag_force));
  if (F_hyd <= 0.0) return out;
  // The engine drag counts toward the rear share so the axle force split
  // stays at the configured bias; a drag surplus moves to the front.
  double F_rear = std::max(0.0, (1.0 - params.brake_bias_front) * F_total -
                                    std::max(0.0, drag_force));
  double F_front = F_hyd - F_rear;
  out.front = axle_pressure_from_force(F_front, params.r_wheel_front, params);
  out.rear = axle_pressure_from_force(F_rear, params.r_wheel_rear, params);
  return out;
}

ForceCtrlOutput ForceController::step(double F_x_target, const VehicleState& vs,
                                      double warmup_pressure, double a_x_target, double dt) {
  ForceCtrlOutput out;
  const double drag = drag_brake_force(vs.engine_speed, vs.gear_engaged, 0.0, params_, maps_);
  // Hysteresis around the closed-throttle equilibrium -drag so the mode does
  // not chatter when coasting demands roughly the engine drag force.
  if (brake_mode_) {
    if (F_x_target > -drag + cfg_.coast_band) brake_mode_ = false;
  } else {
    if (F_x_target < -drag - cfg_.coast_band) brake_mode_ = true;
  }
  out.brake_mode = brake_mode_;

  if (brake_mode_) {
    pid_reset(trim_state_);
    out.throttle = 0.0;
    if (F_x_target < 0.0) {
      const AxlePressures p = brake_pressure_targets(F_x_target, drag, params_);
      out.p_hyd_front = p.front;
      out.p_hyd_rear = p.rear;
    }
  } else {
    const double T = motor_torque_target(F_x_target, vs.gear_engaged, vs.engine_speed, cfg_,
                                         params_, maps_);
    out.throttle = throttle_from_torque(T, vs.engine_speed, a_x_target, vs.a_x_meas, dt, cfg_,
                                        maps_, trim_state_);
  }
  out.p_front = std::max(out.p_hyd_front, warmup_pressure);
  out.p_rear = std::max(out.p_hyd_rear, warmup_pressure);
  return out;
}

void ForceController::reset() {
  pid_reset(trim_state_);
  brake_mode_ = false;
}

}  // namespace longctrl
