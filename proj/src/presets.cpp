#include "longctrl/presets.hpp"

#include <algorithm>
#include <cmath>

namespace longctrl {

namespace {

std::vector<double> rpm_breakpoints() {
  std::vector<double> rpm;
  for (double r = 1000.0; r <= 9500.0 + 1e-9; r += 500.0) rpm.push_back(r);
  return rpm;
}

double torque_max_at(double rpm) {
  // Turbocharged full-load curve: thin at idle, flat mid-range plateau,
  // tapering toward the rev limit.
  if (rpm <= 3500.0) return 140.0 + (340.0 - 140.0) * (rpm - 1000.0) / 2500.0;
  if (rpm <= 7000.0) return 340.0;
  return 340.0 - (340.0 - 260.0) * (rpm - 7000.0) / 2500.0;
}

double drag_torque_at(double rpm) {
  const double x = rpm / 9500.0;
  return 20.0 + 30.0 * x * x;
}

}  // namespace

Table1D default_torque_max_curve() {
  Table1D t;
  t.x = rpm_breakpoints();
  for (double r : t.x) t.y.push_back(torque_max_at(r));
  return t;
}

Table1D default_drag_torque_curve() {
  Table1D t;
  t.x = rpm_breakpoints();
  for (double r : t.x) t.y.push_back(drag_torque_at(r));
  return t;
}

Table2D default_engine_torque_map() {
  Table2D map;
  for (int i = 0; i <= 10; ++i) map.x.push_back(i / 10.0);  // throttle
  map.y = rpm_breakpoints();
  map.z.reserve(map.x.size() * map.y.size());
  for (double thr : map.x) {
    for (double rpm : map.y) {
      const double drag = drag_torque_at(rpm);
      map.z.push_back(-drag + (torque_max_at(rpm) + drag) * thr);
    }
  }
  return map;
}

EngineCharacteristics invert_engine_map(const Table2D& forward_map,
                                        const std::vector<double>& torque_breakpoints) {
  forward_map.validate("engine map inversion input");
  EngineCharacteristics out;
  out.throttle_map.x = torque_breakpoints;
  out.throttle_map.y = forward_map.y;
  out.throttle_map.z.reserve(torque_breakpoints.size() * forward_map.y.size());
  for (double torque : torque_breakpoints) {
    for (double rpm : forward_map.y) {
      // The forward map is monotone in throttle at fixed rpm; bisect.
      double lo = 0.0;
      double hi = 1.0;
      if (torque <= forward_map.eval(lo, rpm)) {
        out.throttle_map.z.push_back(0.0);
        continue;
      }
      if (torque >= forward_map.eval(hi, rpm)) {
        out.throttle_map.z.push_back(1.0);
        continue;
      }
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (forward_map.eval(mid, rpm) < torque) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      out.throttle_map.z.push_back(0.5 * (lo + hi));
    }
  }
  out.drag_torque_curve.x = forward_map.y;
  for (double rpm : forward_map.y) {
    out.drag_torque_curve.y.push_back(std::max(0.0, -forward_map.eval(0.0, rpm)));
  }
  out.torque_max_curve.x = forward_map.y;
  for (double rpm : forward_map.y) {
    out.torque_max_curve.y.push_back(forward_map.eval(1.0, rpm));
  }
  return out;
}

EngineCharacteristics default_engine_characteristics() {
  std::vector<double> torque;
  for (double T = -60.0; T <= 360.0 + 1e-9; T += 20.0) torque.push_back(T);
  return invert_engine_map(default_engine_torque_map(), torque);
}

SlipConfig default_slip_config() {
  SlipConfig cfg;
  VehicleParams params;
  cfg.r_e_curve_front.x = {0.0};
  cfg.r_e_curve_front.y = {params.r_wheel_front};
  cfg.r_e_curve_rear.x = {0.0};
  cfg.r_e_curve_rear.y = {params.r_wheel_rear};
  return cfg;
}

StackConfig default_stack_config() {
  StackConfig cfg;
  cfg.engine = default_engine_characteristics();
  cfg.slip = default_slip_config();
  cfg.gear.ay_limit_table.x = {0.0};
  cfg.gear.ay_limit_table.y = {8.0};
  cfg.plant.engine_torque_map = default_engine_torque_map();
  return cfg;
}

void StackConfig::validate() const {
  longctrl::validate(params);
  accel.validate();
  force.validate();
  engine.validate();
  gear.validate();
  warmup.validate();
  slip.validate();
  abs.validate();
  tc.validate();
  bpc.validate();
  plant.validate();
}

}  // namespace longctrl
