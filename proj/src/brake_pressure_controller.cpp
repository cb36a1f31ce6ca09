#include "longctrl/brake_pressure_controller.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace longctrl {

void BpcConfig::validate() const {
  if (plant_model_tau <= 0.0) throw ConfigError("brake_pressure_controller.plant_model_tau: must be > 0");
  if (plant_model_deadtime < 0.0)
    throw ConfigError("brake_pressure_controller.plant_model_deadtime: must be >= 0");
  if (gradient_threshold <= 0.0)
    throw ConfigError("brake_pressure_controller.gradient_threshold: must be > 0");
  if (rate_filter_tau < 0.0)
    throw ConfigError("brake_pressure_controller.rate_filter_tau: must be >= 0");
  if (p_command_max <= p_command_min)
    throw ConfigError("brake_pressure_controller.p_command_max: must be > p_command_min");
}

double bpc_step(double p_target, double p_meas, double dt, const BpcConfig& cfg, BpcState& state) {
  if (dt <= 0.0) throw std::invalid_argument("bpc_step: dt must be > 0");
  if (!std::isfinite(p_target) || !std::isfinite(p_meas)) {
    state.fault = true;
    return state.prev_command;
  }

  if (!state.buffer_sized) {
    const auto n = static_cast<std::size_t>(std::lround(cfg.plant_model_deadtime / dt));
    state.delay_buffer.assign(n, 0.0);
    state.delay_head = 0;
    state.buffer_sized = true;
  }

  // Gain scheduling on the target gradient, hysteretic so a constant
  // gradient switches the set at most once.
  const double gradient = std::abs(p_target - state.prev_target) / dt;
  if (state.transient_gains) {
    if (gradient < 0.9 * cfg.gradient_threshold) state.transient_gains = false;
  } else {
    if (gradient > 1.1 * cfg.gradient_threshold) state.transient_gains = true;
  }
  const BpcGainSet& g = state.transient_gains ? cfg.gains_transient : cfg.gains_steady;
  PidConfig outer = cfg.outer_pi;
  outer.kp = g.outer_kp;
  outer.ki = g.outer_ki;
  outer.kd = 0.0;
  PidConfig inner = cfg.inner_pi;
  inner.kp = g.inner_kp;
  inner.ki = g.inner_ki;
  inner.kd = 0.0;

  // Smith predictor: the delay-free model output replaces the (delayed)
  // measurement inside the band covered by the deadtime. With zero deadtime
  // the two model terms cancel exactly.
  const double model_delayed =
      state.delay_buffer.empty() ? state.model_state : state.delay_buffer[state.delay_head];
  const double feedback = p_meas + state.model_state - model_delayed;

  const double rate_setpoint = pid_step(state.outer, outer, p_target - feedback, dt);
  double rate_raw = 0.0;
  if (state.have_prev_feedback) rate_raw = (feedback - state.prev_feedback) / dt;
  state.rate_filtered = lowpass_step(state.rate_filtered, rate_raw, cfg.rate_filter_tau, dt);
  const double delta = pid_step(state.inner, inner, rate_setpoint - state.rate_filtered, dt);

  const double command = std::clamp(p_target + delta, cfg.p_command_min, cfg.p_command_max);

  state.model_state += dt / cfg.plant_model_tau *
                       (cfg.plant_model_gain * command - state.model_state);
  if (!state.delay_buffer.empty()) {
    state.delay_buffer[state.delay_head] = state.model_state;
    state.delay_head = (state.delay_head + 1) % state.delay_buffer.size();
  }

  state.prev_target = p_target;
  state.prev_feedback = feedback;
  state.have_prev_feedback = true;
  state.prev_command = command;
  return command;
}

void bpc_reset(BpcState& state) { state = BpcState{}; }

}  // namespace longctrl
