#pragma once

#include <array>

#include "longctrl/core_types.hpp"

namespace longctrl {

enum class StabilityMode { kInactive, kActive, kPaused };

enum class AbsDecayMode { kTimeBased, kSpeedBased };

struct AbsConfig {
  double kappa_threshold{0.10};         // activation slip magnitude
  double rho_initial{0.7};              // ratio applied on the activation tick
  double k_decrease{20.0};              // [1/s] relative step gain, scaled by slip excess
  double k_increase{4.0};               // [1/s] relative step gain, scaled by slip margin
  double max_decay_rate{0.05};          // [1/s] fraction of the latched max shed per second
  AbsDecayMode decay_mode{AbsDecayMode::kTimeBased};
  double decay_v_ref{80.0};             // [m/s] speed at which speed-based decay equals max_decay_rate
  double pause_force_threshold{2000.0}; // [N] |F_x| below this counts toward the pause
  double pause_time{0.5};               // [s]

  void validate() const;
};

struct TcConfig {
  double kappa_threshold{0.10};
  double kappa_cut_upper{0.25};  // above this, throttle is cut to zero
  double rho_initial{0.7};
  double k_decrease{20.0};       // [1/s]
  double k_increase{4.0};        // [1/s]
  double p_tc_scale{2.0e7};      // [Pa] full-scale counter-pressure at rho = 0

  void validate() const;
};

struct StabilityState {
  StabilityMode mode{StabilityMode::kInactive};
  double p_max_latched{0.0};  // [Pa]
  double rho{1.0};            // [0,1]
  double pause_timer{0.0};    // [s]
};

// One ABS channel (one axle), activating when the slip magnitude crosses the
// threshold. While active the output is rho * p_max, decoupled from the
// incoming target; the latched maximum decays to track the shrinking
// aerodynamic wheel load. The intervention pauses (reverts to passthrough)
// once the estimated tire force has been negligible for the configured time,
// and terminates when the incoming target drops below the decayed maximum.
double abs_step(double p_in, double kappa, double F_x_est, double v, double dt,
                const AbsConfig& cfg, StabilityState& state);

struct TcResult {
  double throttle_out{0.0};
  double p_out_rear{0.0};  // [Pa]
  double p_added{0.0};     // [Pa]
};

// Traction control on the rear axle: counter-pressure grows as rho drops
// below 1, against a constant full-scale reference. The throttle is cut to
// zero whenever slip exceeds kappa_cut_upper.
TcResult tc_step(double throttle_in, double p_in_rear, double kappa_rear, double dt,
                 const TcConfig& cfg, StabilityState& state);

struct StabilityInput {
  double throttle_in{0.0};
  double p_front_in{0.0};        // [Pa]
  double p_rear_in{0.0};         // [Pa]
  std::array<double, 4> kappa{}; // per wheel
  double F_x_est{0.0};           // [N] estimated longitudinal tire force
  double v{0.0};                 // [m/s]
  bool braking{false};           // upstream controller is in brake mode
};

struct StabilityOutput {
  double throttle_out{0.0};
  double p_front_out{0.0};
  double p_rear_out{0.0};
  bool abs_active_front{false};
  bool abs_active_rear{false};
  bool tc_active{false};
  double tc_p_added{0.0};
};

// Composes the per-axle ABS channels with the rear-axle TC. Each axle's ABS
// consumes its worst lock-direction wheel slip (drive slip never reaches the
// brake channels); new ABS interventions are only armed while the upstream
// controller is braking so that drive slip cannot latch the warmup pressure.
class StabilityController {
 public:
  StabilityController(const AbsConfig& abs_cfg, const TcConfig& tc_cfg, bool abs_enabled = true,
                      bool tc_enabled = true)
      : abs_cfg_(abs_cfg), tc_cfg_(tc_cfg), abs_enabled_(abs_enabled), tc_enabled_(tc_enabled) {}

  StabilityOutput step(const StabilityInput& in, double dt);

  void reset();
  const StabilityState& abs_state_front() const { return abs_front_; }
  const StabilityState& abs_state_rear() const { return abs_rear_; }
  const StabilityState& tc_state() const { return tc_; }

 private:
  AbsConfig abs_cfg_;
  TcConfig tc_cfg_;
  bool abs_enabled_{true};
  bool tc_enabled_{true};
  StabilityState abs_front_;
  StabilityState abs_rear_;
  StabilityState tc_;
};

// Signed slip with the largest magnitude among the axle's wheels.
double worst_axle_slip(const std::array<double, 4>& kappa, bool front);

}  // namespace longctrl
