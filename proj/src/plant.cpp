#include "longctrl/plant.hpp"

#include <algorithm>
#include <cmath>

#include "longctrl/force_controller.hpp"

namespace longctrl {

namespace {
constexpr double kSlipVMin = 1.0;  // [m/s] slip denominator floor, matches estimator default
}

void PlantConfig::validate() const {
  engine_torque_map.validate("plant.engine_torque_map");
  if (tau_turbo_rise <= 0.0) throw ConfigError("plant.tau_turbo_rise: must be > 0");
  if (tau_turbo_fall <= 0.0) throw ConfigError("plant.tau_turbo_fall: must be > 0");
  if (shift_cut_duration < 0.0) throw ConfigError("plant.shift_cut_duration: must be >= 0");
  if (tire_front.B <= 0.0 || tire_front.C <= 0.0 || tire_front.mu_road <= 0.0)
    throw ConfigError("plant.tire_front: B, C, mu_road must be > 0");
  if (tire_rear.B <= 0.0 || tire_rear.C <= 0.0 || tire_rear.mu_road <= 0.0)
    throw ConfigError("plant.tire_rear: B, C, mu_road must be > 0");
  if (F_z_static_front <= 0.0) throw ConfigError("plant.F_z_static_front: must be > 0");
  if (F_z_static_rear <= 0.0) throw ConfigError("plant.F_z_static_rear: must be > 0");
  if (aero_balance_front < 0.0 || aero_balance_front > 1.0)
    throw ConfigError("plant.aero_balance_front: must be in [0,1]");
  if (brake_tau <= 0.0) throw ConfigError("plant.brake_tau: must be > 0");
  if (brake_deadtime < 0.0) throw ConfigError("plant.brake_deadtime: must be >= 0");
  if (disc_heat_coeff < 0.0) throw ConfigError("plant.disc_heat_coeff: must be >= 0");
  if (disc_cool_c0 < 0.0 || disc_cool_c1 < 0.0)
    throw ConfigError("plant.disc_cool_c0/c1: must be >= 0");
  if (disc_heat_capacity <= 0.0) throw ConfigError("plant.disc_heat_capacity: must be > 0");
  if (J_wheel <= 0.0) throw ConfigError("plant.J_wheel: must be > 0");
  if (J_driveline < 0.0) throw ConfigError("plant.J_driveline: must be >= 0");
  if (integration_dt <= 0.0) throw ConfigError("plant.integration_dt: must be > 0");
  if (lap_length <= 0.0) throw ConfigError("plant.lap_length: must be > 0");
  if (noise.std_v < 0.0 || noise.std_a_x < 0.0 || noise.std_wheel_speed < 0.0 ||
      noise.std_pressure < 0.0)
    throw ConfigError("plant.noise: std devs must be >= 0");
}

double tire_force(double kappa, double F_z, const TireAxleConfig& axle_cfg) {
  return axle_cfg.mu_road * F_z * std::sin(axle_cfg.C * std::atan(axle_cfg.B * kappa));
}

double disc_thermal_step(double temp, double p, double omega, double v, double dt,
                         const PlantConfig& cfg) {
  const double heating = cfg.disc_heat_coeff * p * std::max(omega, 0.0);
  const double cooling = (cfg.disc_cool_c0 + cfg.disc_cool_c1 * std::max(v, 0.0)) *
                         (temp - cfg.ambient_temp);
  return temp + dt * (heating - cooling) / cfg.disc_heat_capacity;
}

Plant::Plant(const PlantConfig& cfg, const VehicleParams& params, std::uint32_t seed)
    : cfg_(cfg), params_(params), rng_(seed) {
  cfg_.validate();
  validate(params_);
  init(0.0, 1);
}

void Plant::init(double v0, int gear0) {
  state_ = PlantState{};
  state_.v = std::max(0.0, v0);
  state_.gear = gear0;
  state_.gear_pending = gear0;
  state_.disc_temp_front = cfg_.ambient_temp;
  state_.disc_temp_rear = cfg_.ambient_temp;
  state_.wheel_omega[0] = state_.wheel_omega[1] = state_.v / params_.r_wheel_front;
  state_.wheel_omega[2] = state_.wheel_omega[3] = state_.v / params_.r_wheel_rear;
  const auto n = static_cast<std::size_t>(std::lround(cfg_.brake_deadtime / cfg_.integration_dt));
  state_.p_delay_front.assign(n, 0.0);
  state_.p_delay_rear.assign(n, 0.0);
  state_.p_delay_head = 0;
}

double Plant::engine_speed_rpm() const {
  const double omega_rear = cfg_.four_wheel_mode
                                ? 0.5 * (state_.wheel_omega[2] + state_.wheel_omega[3])
                                : state_.wheel_omega[2];
  const double kinematic =
      omega_rear * gear_ratio(params_, state_.gear) * params_.tau_final_drive * kRadPerSecToRpm;
  return std::max(params_.idle_speed, kinematic);
}

double Plant::axle_vertical_load(bool front) const {
  const double df = 0.5 * params_.rho_air * params_.c_l_A * state_.v * state_.v;
  return front ? cfg_.F_z_static_front + cfg_.aero_balance_front * df
               : cfg_.F_z_static_rear + (1.0 - cfg_.aero_balance_front) * df;
}

VehicleState Plant::step(const ActuationCommand& cmd, double yaw_rate, double a_y) {
  const double dt = cfg_.integration_dt;
  const double throttle = clamp01(cmd.throttle);
  const double p_cmd_front = std::max(0.0, cmd.p_brake_target_front);
  const double p_cmd_rear = std::max(0.0, cmd.p_brake_target_rear);

  // Sequential gearbox: a new request starts the shift cut; the gear engages
  // when the cut ends.
  if (state_.shift_timer > 0.0) {
    state_.shift_timer -= dt;
    if (state_.shift_timer <= 0.0) {
      state_.shift_timer = 0.0;
      state_.gear = state_.gear_pending;
    }
  } else if (cmd.gear_request != state_.gear && cmd.gear_request >= 1 &&
             cmd.gear_request <= params_.gear_count()) {
    state_.gear_pending = cmd.gear_request;
    state_.shift_timer = cfg_.shift_cut_duration;
  }
  const bool in_shift = state_.shift_timer > 0.0;

  // Turbo-lagged engine torque; fuel cut above the rev limit.
  const double rpm = engine_speed_rpm();
  double T_map = cfg_.engine_torque_map.eval(throttle, rpm);
  if (rpm >= params_.rev_limit) T_map = std::min(T_map, 0.0);
  const double T_engine_target = in_shift ? 0.0 : T_map;
  const double tau_turbo =
      (T_engine_target > state_.torque_actual) ? cfg_.tau_turbo_rise : cfg_.tau_turbo_fall;
  state_.torque_actual += dt / tau_turbo * (T_engine_target - state_.torque_actual);

  // Brake hydraulics: transport delay, then first-order caliper pressure.
  double delayed_front = p_cmd_front;
  double delayed_rear = p_cmd_rear;
  if (!state_.p_delay_front.empty()) {
    delayed_front = state_.p_delay_front[state_.p_delay_head];
    delayed_rear = state_.p_delay_rear[state_.p_delay_head];
    state_.p_delay_front[state_.p_delay_head] = p_cmd_front;
    state_.p_delay_rear[state_.p_delay_head] = p_cmd_rear;
    state_.p_delay_head = (state_.p_delay_head + 1) % state_.p_delay_front.size();
  }
  state_.p_actual_front =
      std::max(0.0, state_.p_actual_front + dt / cfg_.brake_tau * (delayed_front - state_.p_actual_front));
  state_.p_actual_rear =
      std::max(0.0, state_.p_actual_rear + dt / cfg_.brake_tau * (delayed_rear - state_.p_actual_rear));

  const double Fz_front = axle_vertical_load(true);
  const double Fz_rear = axle_vertical_load(false);
  const double geom = brake_geometry_factor(params_);
  const double ratio = gear_ratio(params_, state_.gear);
  const double eta = state_.torque_actual > 0.0 ? params_.eta_drivetrain : 1.0;
  const double T_drive_axle = state_.torque_actual * ratio * params_.tau_final_drive * eta;

  std::array<double, 4> F_x{};
  std::array<double, 4> kappa{};
  double F_chassis = 0.0;

  auto wheel_contact_v = [&](int i) {
    if (!cfg_.four_wheel_mode) return state_.v;
    const bool front = i < 2;
    const bool left = (i % 2) == 0;
    const double track = front ? params_.track_front : params_.track_rear;
    return state_.v + (left ? -1.0 : 1.0) * yaw_rate * track / 2.0;
  };

  for (int i = 0; i < 4; ++i) {
    const bool front = i < 2;
    const double r = front ? params_.r_wheel_front : params_.r_wheel_rear;
    const double v_c = wheel_contact_v(i);
    kappa[i] = (state_.wheel_omega[i] * r - v_c) / std::max(v_c, kSlipVMin);
    const TireAxleConfig& tire = front ? cfg_.tire_front : cfg_.tire_rear;
    const double Fz_wheel = (front ? Fz_front : Fz_rear) / 2.0;
    F_x[i] = tire_force(kappa[i], Fz_wheel, tire);
    F_chassis += F_x[i];
  }

  // Wheel rotational dynamics. Brake torque opposes rotation and can hold a
  // stopped wheel; the drive torque acts on the rear axle only.
  auto advance_axle = [&](int i0, int i1, double r, double J, double T_drive, double p_brake) {
    const double T_brake_mag = p_brake * geom;
    if (cfg_.four_wheel_mode) {
      for (int i : {i0, i1}) {
        const double T_other = T_drive / 2.0 - r * F_x[i];
        double T_brake = 0.0;
        if (state_.wheel_omega[i] > 0.0) {
          T_brake = -T_brake_mag / 2.0;
        } else {
          T_brake = -std::min(T_brake_mag / 2.0, std::max(T_other, 0.0));
        }
        state_.wheel_omega[i] =
            std::max(0.0, state_.wheel_omega[i] + dt * (T_other + T_brake) / (J / 2.0));
      }
    } else {
      const double T_other = T_drive - r * (F_x[i0] + F_x[i1]);
      double T_brake = 0.0;
      if (state_.wheel_omega[i0] > 0.0) {
        T_brake = -T_brake_mag;
      } else {
        T_brake = -std::min(T_brake_mag, std::max(T_other, 0.0));
      }
      const double omega = std::max(0.0, state_.wheel_omega[i0] + dt * (T_other + T_brake) / J);
      state_.wheel_omega[i0] = omega;
      state_.wheel_omega[i1] = omega;
    }
  };

  const double J_front_axle = 2.0 * cfg_.J_wheel;
  const double J_rear_axle = 2.0 * cfg_.J_wheel + cfg_.J_driveline;
  advance_axle(0, 1, params_.r_wheel_front, J_front_axle, 0.0, state_.p_actual_front);
  advance_axle(2, 3, params_.r_wheel_rear, J_rear_axle, T_drive_axle, state_.p_actual_rear);

  // Chassis.
  const double F_aero = 0.5 * params_.rho_air * params_.c_d_A * state_.v * state_.v;
  const double F_roll =
      state_.v > cfg_.v_roll_resist_min ? params_.c_rr * params_.m * params_.g : 0.0;
  state_.a_x = (F_chassis - F_aero - F_roll) / params_.m;
  state_.v = std::max(0.0, state_.v + dt * state_.a_x);

  // Disc temperatures, odometer, clock.
  const double omega_front = state_.wheel_omega[0];
  const double omega_rear = state_.wheel_omega[2];
  state_.disc_temp_front = disc_thermal_step(state_.disc_temp_front, state_.p_actual_front,
                                             omega_front, state_.v, dt, cfg_);
  state_.disc_temp_rear = disc_thermal_step(state_.disc_temp_rear, state_.p_actual_rear,
                                            omega_rear, state_.v, dt, cfg_);
  state_.distance += state_.v * dt;
  state_.lap_count = static_cast<int>(state_.distance / cfg_.lap_length);
  state_.t += dt;

  // Measurement snapshot with optional seeded sensor noise.
  auto noisy = [&](double value, double std_dev) {
    if (std_dev <= 0.0) return value;
    return value + std_dev * norm_(rng_);
  };
  VehicleState vs;
  vs.t = state_.t;
  vs.v_est = std::max(0.0, noisy(state_.v, cfg_.noise.std_v));
  vs.a_x_meas = noisy(state_.a_x, cfg_.noise.std_a_x);
  vs.a_y_meas = a_y;
  vs.yaw_rate = yaw_rate;
  for (int i = 0; i < 4; ++i) {
    vs.wheel_speed[i] = std::max(0.0, noisy(state_.wheel_omega[i], cfg_.noise.std_wheel_speed));
  }
  vs.engine_speed = engine_speed_rpm();
  vs.gear_engaged = state_.gear;
  vs.p_brake_meas_front = std::max(0.0, noisy(state_.p_actual_front, cfg_.noise.std_pressure));
  vs.p_brake_meas_rear = std::max(0.0, noisy(state_.p_actual_rear, cfg_.noise.std_pressure));
  vs.throttle_meas = throttle;
  vs.disc_temp_front = state_.disc_temp_front;
  vs.disc_temp_rear = state_.disc_temp_rear;
  vs.lap_count = state_.lap_count;
  return vs;
}

}  // namespace longctrl
