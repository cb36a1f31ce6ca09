#include "longctrl/slip_estimation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace longctrl {

void SlipConfig::validate() const {
  r_e_curve_front.validate("slip.r_e_curve_front");
  r_e_curve_rear.validate("slip.r_e_curve_rear");
  for (double r : r_e_curve_front.y) {
    if (r <= 0.0) throw ConfigError("slip.r_e_curve_front: radii must be > 0");
  }
  for (double r : r_e_curve_rear.y) {
    if (r <= 0.0) throw ConfigError("slip.r_e_curve_rear: radii must be > 0");
  }
  if (p_norm <= 0.0) throw ConfigError("slip.p_norm: must be > 0");
  if (k_lowpass_tau < 0.0) throw ConfigError("slip.k_lowpass_tau: must be >= 0");
  if (a_x_filter_tau < 0.0) throw ConfigError("slip.a_x_filter_tau: must be >= 0");
  if (v_min_denominator <= 0.0) throw ConfigError("slip.v_min_denominator: must be > 0");
}

double contact_velocity(const VehicleState& vs, Wheel wheel, double v_cog,
                        const VehicleParams& geometry) {
  const bool front = (wheel == Wheel::kFrontLeft || wheel == Wheel::kFrontRight);
  const bool left = (wheel == Wheel::kFrontLeft || wheel == Wheel::kRearLeft);
  const double track = front ? geometry.track_front : geometry.track_rear;
  // Positive yaw rate turns left, making the right-hand side the outer one.
  const double sign = left ? -1.0 : 1.0;
  return v_cog + sign * vs.yaw_rate * track / 2.0;
}

double wheel_slip(double omega, double v_contact, double r_e, const SlipConfig& cfg) {
  if (omega < 0.0) throw std::invalid_argument("wheel_slip: omega must be >= 0");
  const double denom = std::max(v_contact, cfg.v_min_denominator);
  return (omega * r_e - v_contact) / denom;
}

double velocity_from_front_wheels(const VehicleState& vs, const VehicleParams& geometry,
                                  const SlipConfig& cfg) {
  const Wheel fronts[2] = {Wheel::kFrontLeft, Wheel::kFrontRight};
  double sum = 0.0;
  for (Wheel w : fronts) {
    const double omega = vs.wheel_speed[static_cast<int>(w)];
    // Solve v = omega * r_e(v) for the wheel's contact speed.
    double v_wheel = omega * geometry.r_wheel_front;
    for (int it = 0; it < 2; ++it) {
      v_wheel = omega * cfg.r_e_curve_front.eval(v_wheel);
    }
    const double sign = (w == Wheel::kFrontLeft) ? -1.0 : 1.0;
    sum += v_wheel - sign * vs.yaw_rate * geometry.track_front / 2.0;
  }
  return sum / 2.0;
}

double blend_factor(double p_b_front, double a_x_filtered, const SlipConfig& cfg) {
  if (p_b_front < 0.0) throw std::invalid_argument("blend_factor: pressure must be >= 0");
  const double from_pressure = p_b_front / cfg.p_norm;
  const double from_decel = -(a_x_filtered + cfg.a_offset);
  return clamp01(std::max(from_pressure, from_decel));
}

SlipEstimate SlipEstimator::estimate(const VehicleState& vs, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("SlipEstimator::estimate: dt must be > 0");
  state_.a_x_filtered = lowpass_step(state_.a_x_filtered, vs.a_x_meas, cfg_.a_x_filter_tau, dt);
  const double k_raw = blend_factor(vs.p_brake_meas_front, state_.a_x_filtered, cfg_);
  state_.k_filtered = lowpass_step(state_.k_filtered, k_raw, cfg_.k_lowpass_tau, dt);

  SlipEstimate out;
  const double v_fw = velocity_from_front_wheels(vs, geometry_, cfg_);
  out.v_blend = (1.0 - state_.k_filtered) * v_fw + state_.k_filtered * vs.v_est;
  if (out.v_blend < cfg_.v_min_denominator) return out;  // standstill: report zero slip

  for (int i = 0; i < 4; ++i) {
    const Wheel w = static_cast<Wheel>(i);
    const bool front = (w == Wheel::kFrontLeft || w == Wheel::kFrontRight);
    const double v_contact = contact_velocity(vs, w, out.v_blend, geometry_);
    const Table1D& curve = front ? cfg_.r_e_curve_front : cfg_.r_e_curve_rear;
    const double r_e = curve.eval(v_contact);
    out.kappa[i] = wheel_slip(vs.wheel_speed[i], v_contact, r_e, cfg_);
  }
  return out;
}

}  // namespace longctrl
