#pragma once

#include "longctrl/control_primitives.hpp"
#include "longctrl/core_types.hpp"

namespace longctrl {

struct AccelCtrlConfig {
  PidConfig pid{.kp = 600.0,
                .ki = 1200.0,
                .kd = 0.0,
                .out_min = -2000.0,
                .out_max = 2000.0,
                .tau_derivative_filter = 0.02};  // feedback on a_x error, output in N
  double v_roll_threshold{0.5};  // [m/s] rolling resistance zeroed below this

  void validate() const;
};

struct DrivingResistances {
  double F_aero{0.0};  // [N]
  double F_roll{0.0};  // [N]
};

// Aerodynamic drag 0.5*rho*c_d_A*v^2 and rolling resistance c_rr*m*g
// (zero below the rolling threshold). Both are returned as positive
// traction demand.
DrivingResistances driving_resistances(double v, const AccelCtrlConfig& cfg,
                                       const VehicleParams& params);

// (m + J_drivetrain / r_wheel_rear^2) * a_x_target + F_aero + F_roll
double feedforward_force(double a_x_target, double v, const AccelCtrlConfig& cfg,
                         const VehicleParams& params);

// Feedforward force plus PID feedback on the acceleration error.
class AccelController {
 public:
  AccelController(const AccelCtrlConfig& cfg, const VehicleParams& params)
      : cfg_(cfg), params_(params) {}

  double step(const AccelCommand& cmd, const VehicleState& vs, double dt);

  void reset() { pid_reset(pid_state_); }
  const PidState& pid_state() const { return pid_state_; }

 private:
  AccelCtrlConfig cfg_;
  VehicleParams params_;
  PidState pid_state_;
};

}  // namespace longctrl
