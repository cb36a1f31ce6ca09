#pragma once

#include <vector>

#include "longctrl/core_types.hpp"

namespace longctrl {

enum class AntiWindup {
  kConditionalIntegration,  // freeze integrator when saturated in the error's direction
  kBackCalculation,
};

struct PidConfig {
  double kp{0.0};
  double ki{0.0};
  double kd{0.0};
  double out_min{-1e18};
  double out_max{1e18};
  double tau_derivative_filter{0.0};  // [s], 0 = unfiltered derivative
  AntiWindup anti_windup{AntiWindup::kConditionalIntegration};
  double back_calc_tau{0.05};  // [s], only for kBackCalculation
};

struct PidState {
  double integrator{0.0};       // accumulated error [unit*s]
  double prev_error{0.0};
  double prev_derivative{0.0};  // filtered derivative
  bool initialized{false};
};

// One discrete PID update. Output is always inside [out_min, out_max];
// the integrator is kept bounded so that ki*integrator stays within the
// output limits. Non-finite error throws std::invalid_argument and
// leaves the state unchanged.
double pid_step(PidState& state, const PidConfig& cfg, double error, double dt);

void pid_reset(PidState& state);

// Exponential smoothing y + dt/(tau+dt) * (u - y). tau = 0 passes the
// input through.
double lowpass_step(double y_prev, double input, double tau, double dt);

// Linearly interpolated lookup over a strictly increasing breakpoint
// axis; queries outside the axis clamp to the edge values.
struct Table1D {
  std::vector<double> x;  // breakpoints, strictly increasing
  std::vector<double> y;  // values, same length as x

  void validate(const std::string& name = "table1d") const;
  double eval(double xq) const;
};

// Bilinear interpolation on a rectangular grid, clamped outside the hull.
// Values are row-major: z[ix * y.size() + iy].
struct Table2D {
  std::vector<double> x;  // first axis breakpoints, strictly increasing
  std::vector<double> y;  // second axis breakpoints, strictly increasing
  std::vector<double> z;  // x.size() * y.size() values

  void validate(const std::string& name = "table2d") const;
  double eval(double xq, double yq) const;
};

double clamp01(double v);

}  // namespace longctrl
