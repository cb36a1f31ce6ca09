#pragma once

#include <string>
#include <vector>

#include "longctrl/core_types.hpp"
#include "longctrl/presets.hpp"

namespace longctrl {

// One sample of the planned motion. Profiles are sampled densely so previews
// and reference lookups are simple linear interpolations.
struct ProfilePoint {
  double t{0.0};    // [s]
  double v{0.0};    // [m/s] planned speed
  double a_x{0.0};  // [m/s^2] planned longitudinal acceleration
  double a_y{0.0};  // [m/s^2] planned lateral acceleration
};

using Profile = std::vector<ProfilePoint>;

// Piecewise-linear acceleration segment; v integrates quadratically.
struct ProfileSegment {
  double duration{0.0};  // [s]
  double a_x_start{0.0};
  double a_x_end{0.0};
  double a_y_start{0.0};
  double a_y_end{0.0};
};

Profile generate_profile(double v0, const std::vector<ProfileSegment>& segments,
                         double dt_sample = 0.02);

ProfilePoint sample_profile(const Profile& profile, double t);

// Module tick rates in Hz. The plant rate must be an integer multiple of
// every controller rate.
struct RunnerRates {
  double gear{50.0};
  double warmup{10.0};
  double longitudinal{100.0};
  double bpc{1000.0};
  double plant{1000.0};

  void validate() const;
};

struct ScenarioConfig {
  std::string name{"unnamed"};
  Profile profile;
  double duration{10.0};  // [s]
  double v0{0.0};         // [m/s]
  int gear0{1};
  RunnerRates rates;
  std::uint32_t seed{1};
  bool abs_enabled{true};
  bool tc_enabled{true};
  bool warmup_enabled{false};
  bool predictive_gear{true};
  // Velocity feedback of the stand-in command source: a_x_target =
  // a_x_planned + gain * (v_target - v_est). Zero replays the plan verbatim.
  double velocity_tracking_gain{0.5};

  void validate() const;
};

std::vector<std::string> builtin_scenario_names();

// Builds a bundled scenario and applies its plant adjustments (road friction,
// lap length, ...) to the stack when one is given. Throws ConfigError for
// unknown names.
ScenarioConfig make_builtin_scenario(const std::string& name, StackConfig* stack = nullptr);

}  // namespace longctrl
