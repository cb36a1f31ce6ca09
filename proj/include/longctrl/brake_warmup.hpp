#pragma once

#include "longctrl/core_types.hpp"

namespace longctrl {

struct WarmupConfig {
  double p_warmup{5.0e5};            // [Pa] pressure applied while warming up
  double ay_disable_threshold{4.0};  // [m/s^2] transient disable in corners
  int max_laps{4};
  double temp_target{450.0};         // [degC]

  void validate() const;
};

// Applies a small brake pressure during normal driving to heat the discs.
// Temperature and lap-count disables latch for the session; the
// lateral-acceleration disable is transient.
class BrakeWarmup {
 public:
  explicit BrakeWarmup(const WarmupConfig& cfg) : cfg_(cfg) {}

  double pressure(double ay_target, double disc_temp, int lap_count);

  bool disabled() const { return disabled_; }

 private:
  WarmupConfig cfg_;
  bool disabled_{false};
};

// Final brake pressure is the maximum of the braking target and the warmup
// pressure, so warmup never reduces a braking command.
double merge_warmup(double p_target, double p_warmup);

}  // namespace longctrl
