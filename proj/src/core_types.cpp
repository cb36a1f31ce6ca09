#include "longctrl/core_types.hpp"

#include <cmath>
#include <sstream>

namespace longctrl {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

void validate(const VehicleParams& p) {
  require(p.m > 0.0, "vehicle.m must be > 0");
  require(p.J_drivetrain > 0.0, "vehicle.J_drivetrain must be > 0");
  require(p.r_wheel_front > 0.0, "vehicle.r_wheel_front must be > 0");
  require(p.r_wheel_rear > 0.0, "vehicle.r_wheel_rear must be > 0");
  require(!p.gear_ratios.empty(), "vehicle.gear_ratios must not be empty");
  for (size_t i = 0; i < p.gear_ratios.size(); ++i) {
    require(p.gear_ratios[i] > 0.0, "vehicle.gear_ratios must be > 0");
    if (i > 0) {
      require(p.gear_ratios[i] < p.gear_ratios[i - 1],
              "vehicle.gear_ratios must be strictly decreasing with gear number");
    }
  }
  require(p.tau_final_drive > 0.0, "vehicle.tau_final_drive must be > 0");
  require(p.eta_drivetrain > 0.0 && p.eta_drivetrain <= 1.0,
          "vehicle.eta_drivetrain must be in (0,1]");
  require(p.d_bore > 0.0, "vehicle.d_bore must be > 0");
  require(p.mu_brake > 0.0, "vehicle.mu_brake must be > 0");
  require(p.r_lever > 0.0, "vehicle.r_lever must be > 0");
  require(p.brake_bias_front > 0.0 && p.brake_bias_front < 1.0,
          "vehicle.brake_bias_front must be in (0,1)");
  require(p.c_d_A > 0.0, "vehicle.c_d_A must be > 0");
  require(p.rho_air > 0.0, "vehicle.rho_air must be > 0");
  require(p.c_rr > 0.0, "vehicle.c_rr must be > 0");
  require(p.c_l_A > 0.0, "vehicle.c_l_A must be > 0");
  require(p.g > 0.0, "vehicle.g must be > 0");
  require(p.wheelbase > 0.0, "vehicle.wheelbase must be > 0");
  require(p.track_front > 0.0, "vehicle.track_front must be > 0");
  require(p.track_rear > 0.0, "vehicle.track_rear must be > 0");
  require(p.cog_to_front > 0.0 && p.cog_to_front < p.wheelbase,
          "vehicle.cog_to_front must be in (0, wheelbase)");
  require(p.rev_limit > 0.0, "vehicle.rev_limit must be > 0");
  require(p.idle_speed > 0.0, "vehicle.idle_speed must be > 0");
  require(p.downshift_rpm > 0.0, "vehicle.downshift_rpm must be > 0");
  require(p.upshift_rpm > p.downshift_rpm,
          "vehicle.upshift_rpm must be > downshift_rpm");
  require(p.overrev_block_rpm >= p.upshift_rpm,
          "vehicle.overrev_block_rpm must be >= upshift_rpm");
}

void validate(const VehicleState& vs, const VehicleParams& p) {
  require(finite(vs.t), "state.t must be finite");
  require(finite(vs.v_est), "state.v_est must be finite");
  require(finite(vs.a_x_meas) && finite(vs.a_y_meas) && finite(vs.yaw_rate),
          "state accelerations and yaw rate must be finite");
  for (int i = 0; i < 4; ++i) {
    require(finite(vs.wheel_speed[i]) && vs.wheel_speed[i] >= 0.0,
            "state.wheel_speed must be >= 0");
  }
  require(finite(vs.engine_speed) && vs.engine_speed >= 0.0,
          "state.engine_speed must be >= 0");
  require(vs.gear_engaged >= 0 && vs.gear_engaged <= p.gear_count(),
          "state.gear_engaged outside configured gear range");
  require(vs.p_brake_meas_front >= 0.0 && vs.p_brake_meas_rear >= 0.0,
          "state brake pressures must be >= 0");
  require(vs.throttle_meas >= 0.0 && vs.throttle_meas <= 1.0,
          "state.throttle_meas must be in [0,1]");
  require(vs.lap_count >= 0, "state.lap_count must be >= 0");
}

void validate(const Trajectory& traj) {
  for (size_t i = 0; i < traj.size(); ++i) {
    std::ostringstream at;
    at << "trajectory point " << i;
    require(finite(traj[i].t_offset) && finite(traj[i].v_target) &&
                finite(traj[i].a_y_planned) && finite(traj[i].a_x_planned),
            at.str() + ": values must be finite");
    require(traj[i].v_target >= 0.0, at.str() + ": v_target must be >= 0");
    if (i > 0) {
      require(traj[i].t_offset > traj[i - 1].t_offset,
              at.str() + ": t_offset must be strictly increasing");
    }
  }
}

void validate(const ActuationCommand& cmd, const VehicleParams& p, double p_hydraulic_max) {
  require(cmd.throttle >= 0.0 && cmd.throttle <= 1.0, "command.throttle must be in [0,1]");
  require(cmd.p_brake_target_front >= 0.0 && cmd.p_brake_target_front <= p_hydraulic_max,
          "command.p_brake_target_front outside [0, hydraulic max]");
  require(cmd.p_brake_target_rear >= 0.0 && cmd.p_brake_target_rear <= p_hydraulic_max,
          "command.p_brake_target_rear outside [0, hydraulic max]");
  require(cmd.gear_request >= 1 && cmd.gear_request <= p.gear_count(),
          "command.gear_request outside configured gear range");
}

double gear_ratio(const VehicleParams& p, int gear) {
  if (gear < 1 || gear > p.gear_count()) {
    throw std::invalid_argument("invalid gear " + std::to_string(gear) +
                                ", expected 1.." + std::to_string(p.gear_count()));
  }
  return p.gear_ratios[static_cast<size_t>(gear - 1)];
}

double engine_speed_from_velocity(double v, int gear, const VehicleParams& p) {
  const double ratio = gear_ratio(p, gear);  // throws on invalid gear
  const double omega_wheel = v / p.r_wheel_rear;
  return omega_wheel * ratio * p.tau_final_drive * kRadPerSecToRpm;
}

}  // namespace longctrl
