#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "longctrl/scenarios.hpp"

namespace longctrl {

// One plant tick of the closed-loop log. Column order in the CSV matches
// declaration order here.
struct LogRow {
  double t{0.0};
  double v{0.0};          // plant ground truth
  double v_target{0.0};
  double v_est{0.0};
  double v_blend{0.0};
  double a_x{0.0};        // plant ground truth
  double a_x_target{0.0};
  double a_x_planned{0.0};
  double a_y{0.0};
  double yaw_rate{0.0};
  double F_x_target{0.0};
  double throttle{0.0};
  double p_hyd_front{0.0};
  double p_hyd_rear{0.0};
  double p_merged_front{0.0};
  double p_merged_rear{0.0};
  double p_target_front{0.0};  // after the stability layer
  double p_target_rear{0.0};
  double p_cmd_front{0.0};     // brake-pressure-loop actuator command
  double p_cmd_rear{0.0};
  double p_meas_front{0.0};
  double p_meas_rear{0.0};
  double warmup_pressure{0.0};
  int gear_engaged{1};
  int gear_request{1};
  double engine_rpm{0.0};
  double kappa_fl{0.0};
  double kappa_fr{0.0};
  double kappa_rl{0.0};
  double kappa_rr{0.0};
  double k_blend{0.0};
  int brake_mode{0};
  int abs_front{0};
  int abs_rear{0};
  int tc_active{0};
  double tc_p_added{0.0};
  double disc_temp_front{0.0};
  double disc_temp_rear{0.0};
  int lap_count{0};
  double distance{0.0};
  double ay_shift_limit{0.0};  // gear-shift lateral limit at current speed
};

using Log = std::vector<LogRow>;

struct InterventionWindow {
  double t_start{0.0};
  double t_end{0.0};
};

struct Metrics {
  double rms_ax_error{0.0};       // [m/s^2] over the braking mask
  double rms_v_error{0.0};        // [m/s] over the full run
  std::array<double, 4> max_abs_slip{};
  int shifts_during_high_ay{0};
  double time_to_disc_temp{-1.0};  // [s] first time the front disc reaches the target, -1 if never
  std::vector<InterventionWindow> abs_windows;
  std::vector<InterventionWindow> tc_windows;
  double final_v{0.0};
  double distance{0.0};
  double max_disc_temp_front{0.0};
  double max_disc_temp_rear{0.0};
};

struct MetricsOptions {
  double braking_mask_ax_below{-3.0};  // rows with planned a_x <= this count as braking
  double disc_temp_target{450.0};      // [degC]
};

Metrics compute_metrics(const Log& log, const MetricsOptions& opts = {});

// Hard safety checks over a finished log. Returns human-readable violation
// descriptions; empty means clean. The shift-block check only applies when
// the run had the predictive shift cut enabled.
std::vector<std::string> check_safety_invariants(const Log& log, const StackConfig& stack,
                                                 bool predictive_gear);

struct RunResult {
  Log log;
  Metrics metrics;
};

// Deterministic multi-rate closed loop: gear shift, brake warmup, the
// longitudinal controller with its stability layers, the brake-pressure
// loop, and the plant, each at its configured rate with zero-order hold in
// between. Controllers only ever see the snapshot from the previous plant
// tick.
RunResult run_scenario(const ScenarioConfig& scenario, const StackConfig& stack);

void write_timeseries_csv(const std::string& path, const Log& log);
void write_metrics_json(const std::string& path, const Metrics& metrics,
                        const std::vector<std::string>& violations);

}  // namespace longctrl
