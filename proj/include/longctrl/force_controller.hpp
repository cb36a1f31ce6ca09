#pragma once

#include "longctrl/control_primitives.hpp"
#include "longctrl/core_types.hpp"

namespace longctrl {

// Static engine characteristics used by the controller. The throttle map is
// the inverse of the engine's steady-state torque map; the drag curve holds
// the braking torque magnitude at closed throttle.
struct EngineCharacteristics {
  Table2D throttle_map;       // (torque [Nm], engine speed [rpm]) -> throttle [0,1]
  Table1D drag_torque_curve;  // engine speed [rpm] -> drag torque magnitude [Nm], >= 0
  Table1D torque_max_curve;   // engine speed [rpm] -> max torque [Nm]

  void validate() const;
};

struct ForceCtrlConfig {
  PidConfig throttle_pid{.kp = 0.01,
                         .ki = 0.02,
                         .kd = 0.0,
                         .out_min = -0.2,
                         .out_max = 0.2,
                         .tau_derivative_filter = 0.02};  // trim on a_x error
  double coast_band{300.0};       // [N] hysteresis half-width around drag equilibrium
  double stall_guard_rpm{2200.0}; // below this, demand at least idle_torque_min
  double idle_torque_min{15.0};   // [Nm]

  void validate() const;
};

// Torque demand from the longitudinal force target through the engaged
// gear: r_wheel_rear / (tau_gearbox * tau_final_drive * eta) * F, clamped
// to [0, torque_max(rpm)] with stall and over-rev guards.
double motor_torque_target(double F_x_target, int gear, double engine_speed_rpm,
                           const ForceCtrlConfig& cfg, const VehicleParams& params,
                           const EngineCharacteristics& maps);

// Inverse-map throttle for the torque demand plus a small PID trim on the
// acceleration error. Result is clamped to [0,1].
double throttle_from_torque(double T_target, double engine_speed_rpm, double a_x_target,
                            double a_x_meas, double dt, const ForceCtrlConfig& cfg,
                            const EngineCharacteristics& maps, PidState& trim_state);

// Braking force at the rear wheels caused by engine drag at the given
// throttle, linearly faded to zero as the throttle rises to the map's
// zero-torque value.
double drag_brake_force(double engine_speed_rpm, int gear, double throttle,
                        const VehicleParams& params, const EngineCharacteristics& maps);

// Geometry factor of the braking system: 2*pi*(d_bore/2)^2 * mu_brake *
// r_lever [m^3]. Axle brake torque = pressure * factor.
double brake_geometry_factor(const VehicleParams& params);

// Pressure producing the given braking force on one axle.
double axle_pressure_from_force(double F_axle, double r_wheel, const VehicleParams& params);

struct AxlePressures {
  double front{0.0};  // [Pa]
  double rear{0.0};   // [Pa]
};

// Splits a braking demand (F_x_target < 0, magnitude includes the engine
// drag share) into per-axle pressures. The drag force acts on the rear
// axle only, so the hydraulic rear share is reduced by it such that
// front : (rear hydraulic + drag) matches the configured bias; the rear
// is floored at zero and any excess demand moves to the front.
AxlePressures brake_pressure_targets(double F_x_target, double drag_force,
                                     const VehicleParams& params);

struct ForceCtrlOutput {
  double throttle{0.0};
  double p_hyd_front{0.0};  // [Pa] hydraulic demand before the warmup merge
  double p_hyd_rear{0.0};   // [Pa]
  double p_front{0.0};      // [Pa] after the warmup merge
  double p_rear{0.0};       // [Pa]
  bool brake_mode{false};
};

// Splits the force target into a throttle or per-axle brake pressures with
// drive/brake mode hysteresis around the engine-drag equilibrium.
class ForceController {
 public:
  ForceController(const ForceCtrlConfig& cfg, const VehicleParams& params,
                  const EngineCharacteristics& maps)
      : cfg_(cfg), params_(params), maps_(maps) {}

  ForceCtrlOutput step(double F_x_target, const VehicleState& vs, double warmup_pressure,
                       double a_x_target, double dt);

  void reset();
  bool brake_mode() const { return brake_mode_; }
  const EngineCharacteristics& maps() const { return maps_; }

 private:
  ForceCtrlConfig cfg_;
  VehicleParams params_;
  EngineCharacteristics maps_;
  PidState trim_state_;
  bool brake_mode_{false};
};

}  // namespace longctrl
