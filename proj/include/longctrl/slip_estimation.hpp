#pragma once

#include <array>

#include "longctrl/control_primitives.hpp"
#include "longctrl/core_types.hpp"

namespace longctrl {

struct SlipConfig {
  Table1D r_e_curve_front;         // v [m/s] -> effective rolling radius [m]
  Table1D r_e_curve_rear;          // v [m/s] -> effective rolling radius [m]
  double p_norm{5.0e5};            // [Pa] front pressure that saturates the blend
  double a_offset{5.0};            // [m/s^2] deceleration offset in the blend
  double k_lowpass_tau{0.05};      // [s] blend factor filter; fast enough that
                                   // a braking front axle stops feeding the
                                   // wheel-speed side within a few ticks
  double a_x_filter_tau{0.2};      // [s] acceleration filter feeding the blend
  double v_min_denominator{1.0};   // [m/s] slip denominator floor

  void validate() const;
};

struct SlipState {
  double k_filtered{0.0};    // [0,1]
  double a_x_filtered{0.0};  // [m/s^2]
};

struct SlipEstimate {
  std::array<double, 4> kappa{};  // indexed by Wheel
  double v_blend{0.0};            // [m/s]
};

// Longitudinal velocity at a wheel center for the rigid body moving at v_cog
// with the given yaw rate: outer wheels run faster by yaw_rate * track / 2.
double contact_velocity(const VehicleState& vs, Wheel wheel, double v_cog,
                        const VehicleParams& geometry);

// Pacejka slip ratio. Driving slip is positive, braking negative, -1 at full
// lock; the denominator is floored to keep standstill finite.
double wheel_slip(double omega, double v_contact, double r_e, const SlipConfig& cfg);

// Vehicle speed assuming the front wheels roll without slip: invert the
// contact-velocity relation per front wheel and average. The speed-dependent
// radius is resolved by two fixed-point iterations seeded with the nominal
// front radius.
double velocity_from_front_wheels(const VehicleState& vs, const VehicleParams& geometry,
                                  const SlipConfig& cfg);

// Raw interpolation factor between front-wheel velocity (0) and the state
// estimate (1): braking pressure or strong deceleration push it to 1.
double blend_factor(double p_b_front, double a_x_filtered, const SlipConfig& cfg);

class SlipEstimator {
 public:
  SlipEstimator(const SlipConfig& cfg, const VehicleParams& geometry)
      : cfg_(cfg), geometry_(geometry) {}

  SlipEstimate estimate(const VehicleState& vs, double dt);

  void reset() { state_ = SlipState{}; }
  const SlipState& state() const { return state_; }

 private:
  SlipConfig cfg_;
  VehicleParams geometry_;
  SlipState state_;
};

}  // namespace longctrl
