#pragma once

#include <cstddef>
#include <vector>

#include "longctrl/control_primitives.hpp"
#include "longctrl/core_types.hpp"

namespace longctrl {

// PI gains for one operating regime of the cascade.
struct BpcGainSet {
  double outer_kp{0.0};  // [1/s] pressure error -> rate setpoint
  double outer_ki{0.0};  // [1/s^2]
  double inner_kp{0.0};  // [s] rate error -> command delta
  double inner_ki{0.0};  // [-]
};

struct BpcConfig {
  // Limit/anti-windup templates; kp/ki are filled from the active gain set.
  PidConfig outer_pi{.kp = 0.0, .ki = 0.0, .kd = 0.0, .out_min = -4.0e8, .out_max = 4.0e8};
  // The inner output is a trim on top of the unity target feedforward; its
  // authority stays a fraction of full scale so a collapsing target (wheel
  // slip interventions) propagates to the line within a few milliseconds.
  PidConfig inner_pi{.kp = 0.0, .ki = 0.0, .kd = 0.0, .out_min = -5.0e6, .out_max = 5.0e6};
  double plant_model_gain{1.0};
  double plant_model_tau{0.02};       // [s]
  double plant_model_deadtime{0.01};  // [s]
  double gradient_threshold{1.0e7};   // [Pa/s] target-gradient split between gain sets
  BpcGainSet gains_transient{.outer_kp = 45.0, .outer_ki = 60.0, .inner_kp = 0.015, .inner_ki = 3.00};
  BpcGainSet gains_steady{.outer_kp = 30.0, .outer_ki = 40.0, .inner_kp = 0.010, .inner_ki = 2.00};
  // The rate fed to the inner PI is a backward difference of the sampled
  // feedback; without smoothing, the tick-to-tick quantization couples with
  // the command saturation into a sample-rate limit cycle.
  double rate_filter_tau{0.004};  // [s]
  double p_command_min{0.0};   // [Pa]
  double p_command_max{2.5e7}; // [Pa]

  void validate() const;
};

struct BpcState {
  PidState outer;
  PidState inner;
  double model_state{0.0};           // [Pa] undelayed internal-model pressure
  std::vector<double> delay_buffer;  // ring of model outputs spanning the deadtime
  std::size_t delay_head{0};
  bool buffer_sized{false};
  double prev_target{0.0};     // [Pa]
  double prev_feedback{0.0};   // [Pa]
  bool have_prev_feedback{false};
  double rate_filtered{0.0};   // [Pa/s] smoothed feedback rate
  double prev_command{0.0};    // [Pa] held on fault
  bool transient_gains{false};
  bool fault{false};
};

// One 1 kHz tick of the cascaded PI brake-pressure loop with Smith-predictor
// dead-time compensation. The outer PI turns the pressure error into a rate
// setpoint, the inner PI turns the rate error into a correction on top of the
// unity target feedforward. Gain sets switch on the magnitude of the target
// gradient with a +-10% hysteresis band. Non-finite inputs latch the fault
// flag and hold the previous command.
double bpc_step(double p_target, double p_meas, double dt, const BpcConfig& cfg, BpcState& state);

void bpc_reset(BpcState& state);

}  // namespace longctrl
