#include "longctrl/stability_controller.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace longctrl {

void AbsConfig::validate() const {
  if (kappa_threshold <= 0.0) throw ConfigError("abs.kappa_threshold: must be > 0");
  if (rho_initial <= 0.0 || rho_initial >= 1.0)
    throw ConfigError("abs.rho_initial: must be in (0,1)");
  if (k_decrease <= 0.0) throw ConfigError("abs.k_decrease: must be > 0");
  if (k_increase <= 0.0) throw ConfigError("abs.k_increase: must be > 0");
  if (max_decay_rate < 0.0) throw ConfigError("abs.max_decay_rate: must be >= 0");
  if (decay_v_ref <= 0.0) throw ConfigError("abs.decay_v_ref: must be > 0");
  if (pause_force_threshold < 0.0) throw ConfigError("abs.pause_force_threshold: must be >= 0");
  if (pause_time <= 0.0) throw ConfigError("abs.pause_time: must be > 0");
}

void TcConfig::validate() const {
  if (kappa_threshold <= 0.0) throw ConfigError("tc.kappa_threshold: must be > 0");
  if (kappa_cut_upper <= kappa_threshold)
    throw ConfigError("tc.kappa_cut_upper: must be > tc.kappa_threshold");
  if (rho_initial <= 0.0 || rho_initial >= 1.0) throw ConfigError("tc.rho_initial: must be in (0,1)");
  if (k_decrease <= 0.0) throw ConfigError("tc.k_decrease: must be > 0");
  if (k_increase <= 0.0) throw ConfigError("tc.k_increase: must be > 0");
  if (p_tc_scale < 0.0) throw ConfigError("tc.p_tc_scale: must be >= 0");
}

double abs_step(double p_in, double kappa, double F_x_est, double v, double dt,
                const AbsConfig& cfg, StabilityState& state) {
  if (dt <= 0.0) throw std::invalid_argument("abs_step: dt must be > 0");
  const double slip = std::abs(kappa);

  switch (state.mode) {
    case StabilityMode::kInactive:
      if (slip > cfg.kappa_threshold && p_in > 0.0) {
        state.mode = StabilityMode::kActive;
        state.p_max_latched = p_in;
        state.rho = cfg.rho_initial;
        state.pause_timer = 0.0;
        return state.rho * state.p_max_latched;
      }
      return p_in;

    case StabilityMode::kPaused:
      if (slip > cfg.kappa_threshold && p_in > 0.0) {
        state.mode = StabilityMode::kActive;
        state.p_max_latched = p_in;
        state.rho = cfg.rho_initial;
        state.pause_timer = 0.0;
        return state.rho * state.p_max_latched;
      }
      return p_in;

    case StabilityMode::kActive: {
      double decay_rate = cfg.max_decay_rate;
      if (cfg.decay_mode == AbsDecayMode::kSpeedBased) {
        decay_rate = cfg.max_decay_rate * std::max(v, 0.0) / cfg.decay_v_ref;
      }
      state.p_max_latched = std::max(0.0, state.p_max_latched * (1.0 - decay_rate * dt));

      if (p_in < state.p_max_latched) {
        state.mode = StabilityMode::kInactive;
        state.pause_timer = 0.0;
        return p_in;
      }

      if (std::abs(F_x_est) < cfg.pause_force_threshold) {
        state.pause_timer += dt;
        if (state.pause_timer >= cfg.pause_time) {
          state.mode = StabilityMode::kPaused;
          return p_in;
        }
      } else {
        state.pause_timer = 0.0;
      }

      if (slip > cfg.kappa_threshold) {
        state.rho *= 1.0 - cfg.k_decrease * (slip - cfg.kappa_threshold) * dt;
      } else {
        state.rho *= 1.0 + cfg.k_increase * (cfg.kappa_threshold - slip) * dt;
      }
      state.rho = std::clamp(state.rho, 0.0, 1.0);
      return state.rho * state.p_max_latched;
    }
  }
  return p_in;
}

TcResult tc_step(double throttle_in, double p_in_rear, double kappa_rear, double dt,
                 const TcConfig& cfg, StabilityState& state) {
  if (dt <= 0.0) throw std::invalid_argument("tc_step: dt must be > 0");
  TcResult out;
  out.throttle_out = throttle_in;
  out.p_out_rear = p_in_rear;

  if (state.mode == StabilityMode::kInactive) {
    if (kappa_rear > cfg.kappa_threshold) {
      state.mode = StabilityMode::kActive;
      state.rho = cfg.rho_initial;
    }
  }

  if (state.mode == StabilityMode::kActive) {
    if (kappa_rear > cfg.kappa_threshold) {
      state.rho *= 1.0 - cfg.k_decrease * (kappa_rear - cfg.kappa_threshold) * dt;
    } else {
      state.rho *= 1.0 + cfg.k_increase * (cfg.kappa_threshold - kappa_rear) * dt;
    }
    state.rho = std::clamp(state.rho, 0.0, 1.0);
    out.p_added = (1.0 - state.rho) * cfg.p_tc_scale;
    out.p_out_rear = p_in_rear + out.p_added;
    if (kappa_rear < cfg.kappa_threshold && out.p_added <= 0.0) {
      state.mode = StabilityMode::kInactive;
      state.rho = 1.0;
    }
  }

  if (kappa_rear > cfg.kappa_cut_upper) out.throttle_out = 0.0;
  return out;
}

double worst_axle_slip(const std::array<double, 4>& kappa, bool front) {
  const int a = front ? static_cast<int>(Wheel::kFrontLeft) : static_cast<int>(Wheel::kRearLeft);
  const int b = front ? static_cast<int>(Wheel::kFrontRight) : static_cast<int>(Wheel::kRearRight);
  return std::abs(kappa[a]) >= std::abs(kappa[b]) ? kappa[a] : kappa[b];
}

StabilityOutput StabilityController::step(const StabilityInput& in, double dt) {
  StabilityOutput out;
  out.throttle_out = in.throttle_in;
  out.p_front_out = in.p_front_in;
  out.p_rear_out = in.p_rear_in;
  const double kappa_rear = worst_axle_slip(in.kappa, false);

  if (abs_enabled_) {
    // Each axle's brake channel sees lock-direction slip only (most negative
    // wheel); a spinning wheel is the driveline's problem, and releasing
    // pressure for it would deepen the spin. Interventions additionally arm
    // only while the upstream controller brakes, so drive slip against the
    // warmup pressure cannot latch the channel. A running intervention keeps
    // stepping so it can terminate cleanly.
    const auto lock_slip = [&in](Wheel a, Wheel b) {
      return std::min({in.kappa[static_cast<int>(a)], in.kappa[static_cast<int>(b)], 0.0});
    };
    const double lock_front = lock_slip(Wheel::kFrontLeft, Wheel::kFrontRight);
    const double lock_rear = lock_slip(Wheel::kRearLeft, Wheel::kRearRight);
    const double kappa_front_abs =
        (in.braking || abs_front_.mode != StabilityMode::kInactive) ? lock_front : 0.0;
    const double kappa_rear_abs =
        (in.braking || abs_rear_.mode != StabilityMode::kInactive) ? lock_rear : 0.0;

    out.p_front_out = abs_step(in.p_front_in, kappa_front_abs, in.F_x_est, in.v, dt, abs_cfg_,
                               abs_front_);
    out.p_rear_out = abs_step(in.p_rear_in, kappa_rear_abs, in.F_x_est, in.v, dt, abs_cfg_,
                              abs_rear_);
    out.abs_active_front = abs_front_.mode == StabilityMode::kActive;
    out.abs_active_rear = abs_rear_.mode == StabilityMode::kActive;
  }

  if (tc_enabled_) {
    const TcResult tc = tc_step(out.throttle_out, out.p_rear_out, kappa_rear, dt, tc_cfg_, tc_);
    out.throttle_out = tc.throttle_out;
    out.p_rear_out = tc.p_out_rear;
    out.tc_active = tc_.mode == StabilityMode::kActive;
    out.tc_p_added = tc.p_added;
  }
  return out;
}

void StabilityController::reset() {
  abs_front_ = StabilityState{};
  abs_rear_ = StabilityState{};
  tc_ = StabilityState{};
}

}  // namespace longctrl
