#pragma once

#include "longctrl/accel_controller.hpp"
#include "longctrl/brake_pressure_controller.hpp"
#include "longctrl/brake_warmup.hpp"
#include "longctrl/control_primitives.hpp"
#include "longctrl/core_types.hpp"
#include "longctrl/force_controller.hpp"
#include "longctrl/gear_shift.hpp"
#include "longctrl/plant.hpp"
#include "longctrl/slip_estimation.hpp"
#include "longctrl/stability_controller.hpp"

namespace longctrl {

// Everything needed to instantiate the full control stack plus the plant.
struct StackConfig {
  VehicleParams params;
  AccelCtrlConfig accel;
  ForceCtrlConfig force;
  EngineCharacteristics engine;
  GearShiftConfig gear;
  WarmupConfig warmup;
  SlipConfig slip;
  AbsConfig abs;
  TcConfig tc;
  BpcConfig bpc;
  PlantConfig plant;

  void validate() const;
};

// Engine torque over (throttle [0,1], rpm), linear in throttle between the
// closed-throttle drag torque and the wide-open torque curve.
Table2D default_engine_torque_map();

// Closed-throttle drag torque magnitude over rpm.
Table1D default_drag_torque_curve();

// Wide-open-throttle torque over rpm.
Table1D default_torque_max_curve();

// Builds the controller-side engine characteristics by numerically inverting
// the forward torque map per rpm breakpoint (bisection on the monotone
// throttle axis).
EngineCharacteristics invert_engine_map(const Table2D& forward_map,
                                        const std::vector<double>& torque_breakpoints);

EngineCharacteristics default_engine_characteristics();

SlipConfig default_slip_config();

StackConfig default_stack_config();

}  // namespace longctrl
