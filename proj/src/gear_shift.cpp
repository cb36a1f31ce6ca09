#include "longctrl/gear_shift.hpp"

#include <cmath>

namespace longctrl {

void GearShiftConfig::validate() const {
  if (t_lookahead < 0.0) throw ConfigError("gear_shift.t_lookahead must be >= 0");
  ay_limit_table.validate("gear_shift.ay_limit_table");
  if (!(downshift_rpm < upshift_rpm))
    throw ConfigError("gear_shift.downshift_rpm must be < upshift_rpm");
  if (!(upshift_rpm <= overrev_block_rpm))
    throw ConfigError("gear_shift.upshift_rpm must be <= overrev_block_rpm");
  if (horizon_length < 0.0) throw ConfigError("gear_shift.horizon_length must be >= 0");
  if (min_shift_interval < 0.0)
    throw ConfigError("gear_shift.min_shift_interval must be >= 0");
}

std::vector<RpmSample> predict_engine_speed(const Trajectory& traj, int gear,
                                            const VehicleParams& params) {
  if (traj.empty()) throw std::invalid_argument("predict_engine_speed: empty trajectory");
  std::vector<RpmSample> out;
  out.reserve(traj.size());
  for (const auto& pt : traj) {
    out.push_back({pt.t_offset, engine_speed_from_velocity(pt.v_target, gear, params)});
  }
  return out;
}

std::optional<double> find_downshift_time(const std::vector<RpmSample>& series,
                                          double downshift_rpm) {
  for (const auto& s : series) {
    if (s.rpm < downshift_rpm) return s.t_offset;
  }
  return std::nullopt;
}

namespace {

// Every preview point inside [t_lookahead, t_shift] is above the lateral
// acceleration limit, i.e. the shift could not be executed anywhere in the
// window. Requires at least one point in the window.
bool shift_blocked_throughout(const Trajectory& traj, const GearShiftConfig& cfg,
                              double t_shift) {
  bool any = false;
  for (const auto& pt : traj) {
    if (pt.t_offset < cfg.t_lookahead) continue;
    if (pt.t_offset > t_shift) break;
    any = true;
    if (std::abs(pt.a_y_planned) <= cfg.ay_limit_table.eval(pt.v_target)) return false;
  }
  return any;
}

}  // namespace

int decide_gear(GearShiftState& state, const VehicleState& vs, const Trajectory& traj,
                const GearShiftConfig& cfg, const VehicleParams& params) {
  validate(traj);
  const int gear = vs.gear_engaged;
  if (gear < 1 || gear > params.gear_count()) return state.current_request;
  // A previous request still in flight; wait for the gearbox to engage it.
  if (state.current_request != gear) return state.current_request;

  // (a) debounce
  if (vs.t - state.last_shift_time < cfg.min_shift_interval) return state.current_request;

  // (b) shift cut under high measured lateral acceleration
  if (cfg.predictive &&
      std::abs(vs.a_y_meas) > cfg.ay_limit_table.eval(vs.v_est)) {
    return state.current_request;
  }

  auto request = [&](int new_gear) {
    state.current_request = new_gear;
    state.last_shift_time = vs.t;
    return new_gear;
  };

  // (c) conventional upshift
  if (gear < params.gear_count() && vs.engine_speed > cfg.upshift_rpm) {
    return request(gear + 1);
  }

  const bool lower_gear_safe =
      gear > 1 && engine_speed_from_velocity(vs.v_est, gear - 1, params) <=
                      cfg.overrev_block_rpm;

  // (d) immediate downshift once the engine speed has dropped below the limit
  if (lower_gear_safe && vs.engine_speed < cfg.downshift_rpm) {
    return request(gear - 1);
  }

  // (e) predictive early downshift: the preview says a downshift will be
  // needed at t_shift, and the whole window [t_lookahead, t_shift] is
  // blocked by high planned lateral acceleration, so shift now.
  if (cfg.predictive && lower_gear_safe && !traj.empty()) {
    const auto rpm_series = predict_engine_speed(traj, gear, params);
    const auto t_shift = find_downshift_time(rpm_series, cfg.downshift_rpm);
    if (t_shift && *t_shift <= cfg.horizon_length && *t_shift >= cfg.t_lookahead &&
        shift_blocked_throughout(traj, cfg, *t_shift)) {
      return request(gear - 1);
    }
  }

  return state.current_request;
}

}  // namespace longctrl
