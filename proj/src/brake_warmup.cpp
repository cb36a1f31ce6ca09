#include "longctrl/brake_warmup.hpp"

#include <algorithm>
#include <cmath>

namespace longctrl {

void WarmupConfig::validate() const {
  if (p_warmup < 0.0) throw ConfigError("brake_warmup.p_warmup must be >= 0");
  if (ay_disable_threshold < 0.0)
    throw ConfigError("brake_warmup.ay_disable_threshold must be >= 0");
  if (max_laps < 0) throw ConfigError("brake_warmup.max_laps must be >= 0");
}

double BrakeWarmup::pressure(double ay_target, double disc_temp, int lap_count) {
  if (disc_temp >= cfg_.temp_target || lap_count >= cfg_.max_laps) {
    disabled_ = true;
  }
  if (disabled_) return 0.0;
  if (std::abs(ay_target) > cfg_.ay_disable_threshold) return 0.0;
  return cfg_.p_warmup;
}

double merge_warmup(double p_target, double p_warmup) {
  return std::max(p_target, p_warmup);
}

}  // namespace longctrl
