#pragma once

#include <optional>
#include <vector>

#include "longctrl/control_primitives.hpp"
#include "longctrl/core_types.hpp"

namespace longctrl {

struct GearShiftConfig {
  double t_lookahead{0.5};      // [s] dead time before the preview horizon opens
  Table1D ay_limit_table;       // v [m/s] -> max |a_y| [m/s^2] allowing a shift
  double downshift_rpm{5500.0};
  double upshift_rpm{8800.0};
  double overrev_block_rpm{9300.0};
  double horizon_length{4.0};   // [s]
  double min_shift_interval{0.4};  // [s] debounce between shift requests
  bool predictive{true};        // false = conventional rpm-threshold strategy

  void validate() const;
};

struct GearShiftState {
  double last_shift_time{-1e9};  // [s]
  int current_request{1};
};

struct RpmSample {
  double t_offset{0.0};  // [s]
  double rpm{0.0};
};

// Engine speed along the trajectory preview if the given gear stays engaged.
std::vector<RpmSample> predict_engine_speed(const Trajectory& traj, int gear,
                                            const VehicleParams& params);

// First preview time at which the predicted engine speed falls below the
// downshift threshold; nullopt if it never does.
std::optional<double> find_downshift_time(const std::vector<RpmSample>& series,
                                          double downshift_rpm);

// One gear-shift controller tick. Returns the gear request (current gear or
// one step up/down). In predictive mode, shifts are cut while the measured
// lateral acceleration exceeds the velocity-dependent limit, and a downshift
// is brought forward when the preview shows it would otherwise land inside a
// high-lateral-acceleration window.
int decide_gear(GearShiftState& state, const VehicleState& vs, const Trajectory& traj,
                const GearShiftConfig& cfg, const VehicleParams& params);

}  // namespace longctrl
