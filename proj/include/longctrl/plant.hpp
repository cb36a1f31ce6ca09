#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "longctrl/control_primitives.hpp"
#include "longctrl/core_types.hpp"

namespace longctrl {

struct TireAxleConfig {
  double B{10.0};     // Magic Formula stiffness
  double C{1.9};      // Magic Formula shape
  double mu_road{1.5};
};

struct PlantNoiseConfig {
  double std_v{0.0};            // [m/s]
  double std_a_x{0.0};          // [m/s^2]
  double std_wheel_speed{0.0};  // [rad/s]
  double std_pressure{0.0};     // [Pa]
};

struct PlantConfig {
  Table2D engine_torque_map;        // (throttle [0,1], rpm) -> N*m, negative drag at low throttle
  double tau_turbo_rise{0.6};       // [s] torque lag when building up
  double tau_turbo_fall{0.1};       // [s] torque lag when dropping
  double shift_cut_duration{0.05};  // [s] torque interruption per gear change

  TireAxleConfig tire_front;
  TireAxleConfig tire_rear;
  double F_z_static_front{4185.6};  // [N] axle
  double F_z_static_rear{3662.4};   // [N] axle
  double aero_balance_front{0.45};  // downforce fraction on the front axle

  double brake_tau{0.02};       // [s] hydraulic first-order
  double brake_deadtime{0.01};  // [s] hydraulic transport delay

  double disc_heat_coeff{3.0e-4};     // [W/(Pa*rad/s)] heating per pressure and wheel speed
  double disc_cool_c0{5.0};           // [W/degC] convective base
  double disc_cool_c1{0.3};           // [W/degC per m/s]
  double ambient_temp{25.0};          // [degC]
  double disc_heat_capacity{4000.0};  // [J/degC] per axle

  double J_wheel{0.8};      // [kg*m^2] per wheel
  double J_driveline{7.4};  // [kg*m^2] engine+gearbox+shafts reflected to the rear axle

  double integration_dt{0.001};  // [s]
  bool four_wheel_mode{false};   // independent wheel states instead of axle-lumped
  double lap_length{5000.0};     // [m]
  double v_roll_resist_min{0.1}; // [m/s] rolling resistance active above this

  PlantNoiseConfig noise;

  void validate() const;
};

struct PlantState {
  double v{0.0};                         // [m/s]
  std::array<double, 4> wheel_omega{};   // [rad/s]; axle-lumped mode mirrors pairs
  double torque_actual{0.0};             // [N*m] lagged engine torque
  double p_actual_front{0.0};            // [Pa]
  double p_actual_rear{0.0};             // [Pa]
  std::vector<double> p_delay_front;     // deadtime ring buffers of commanded pressure
  std::vector<double> p_delay_rear;
  std::size_t p_delay_head{0};
  double disc_temp_front{25.0};  // [degC]
  double disc_temp_rear{25.0};   // [degC]
  int gear{1};
  int gear_pending{1};
  double shift_timer{0.0};  // [s] remaining shift cut
  double distance{0.0};     // [m]
  int lap_count{0};
  double a_x{0.0};          // [m/s^2] last computed chassis acceleration
  double t{0.0};            // [s]
};

// Simplified Magic Formula longitudinal tire force; odd in slip, saturating
// at mu * F_z * sin(C * pi / 2).
double tire_force(double kappa, double F_z, const TireAxleConfig& axle_cfg);

// One Euler step of the per-axle disc temperature.
double disc_thermal_step(double temp, double p, double omega, double v, double dt,
                         const PlantConfig& cfg);

// Fixed-step longitudinal vehicle simulator: turbo-lagged engine with drag
// torque, sequential gearbox with shift cut, slip-based tire forces under
// aerodynamic load, delayed brake hydraulics, and disc heating. Inputs that
// the plant does not model (yaw rate, lateral acceleration) are injected by
// the caller and echoed into the measurement snapshot.
class Plant {
 public:
  Plant(const PlantConfig& cfg, const VehicleParams& params, std::uint32_t seed);

  void init(double v0, int gear0);

  // Advances one integration step and returns the measurement snapshot.
  VehicleState step(const ActuationCommand& cmd, double yaw_rate, double a_y);

  const PlantState& state() const { return state_; }
  PlantState& mutable_state() { return state_; }
  const PlantConfig& config() const { return cfg_; }
  double dt() const { return cfg_.integration_dt; }

 private:
  double engine_speed_rpm() const;
  double axle_vertical_load(bool front) const;

  PlantConfig cfg_;
  VehicleParams params_;
  PlantState state_;
  std::mt19937 rng_;
  std::normal_distribution<double> norm_{0.0, 1.0};
};

}  // namespace longctrl
