#include "longctrl/accel_controller.hpp"

#include <cmath>

namespace longctrl {

void AccelCtrlConfig::validate() const {
  if (!(pid.out_min <= pid.out_max))
    throw ConfigError("accel_controller.pid: out_min must be <= out_max");
  if (pid.tau_derivative_filter < 0.0)
    throw ConfigError("accel_controller.pid: tau_derivative_filter must be >= 0");
  if (v_roll_threshold < 0.0)
    throw ConfigError("accel_controller.v_roll_threshold must be >= 0");
}

DrivingResistances driving_resistances(double v, const AccelCtrlConfig& cfg,
                                       const VehicleParams& params) {
  if (v < 0.0) throw std::invalid_argument("driving_resistances: v must be >= 0");
  DrivingResistances r;
  r.F_aero = 0.5 * params.rho_air * params.c_d_A * v * v;
  r.F_roll = v > cfg.v_roll_threshold ? params.c_rr * params.m * params.g : 0.0;
  return r;
}

double feedforward_force(double a_x_target, double v, const AccelCtrlConfig& cfg,
                         const VehicleParams& params) {
  const auto res = driving_resistances(v, cfg, params);
  const double m_eff =
      params.m + params.J_drivetrain / (params.r_wheel_rear * params.r_wheel_rear);
  return m_eff * a_x_target + res.F_aero + res.F_roll;
}

double AccelController::step(const AccelCommand& cmd, const VehicleState& vs, double dt) {
  if (!std::isfinite(cmd.a_x_target))
    throw std::invalid_argument("accel_controller: non-finite a_x_target");
  const double ff = feedforward_force(cmd.a_x_target, std::max(vs.v_est, 0.0), cfg_, params_);
  const double fb = pid_step(pid_state_, cfg_.pid, cmd.a_x_target - vs.a_x_meas, dt);
  return ff + fb;
}

}  // namespace longctrl
