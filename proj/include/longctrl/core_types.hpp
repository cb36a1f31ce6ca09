#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace longctrl {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kRadPerSecToRpm = 60.0 / (2.0 * kPi);
inline constexpr double kRpmToRadPerSec = 2.0 * kPi / 60.0;

// Thrown for invalid configuration values and malformed config files.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum Wheel : int { kFrontLeft = 0, kFrontRight = 1, kRearLeft = 2, kRearRight = 3 };

// Measured kinematic/drivetrain snapshot consumed by every controller tick.
// Immutable value snapshot; safe to copy between threads.
struct VehicleState {
  double t{0.0};                      // [s]
  double v_est{0.0};                  // state-estimation longitudinal velocity [m/s]
  double a_x_meas{0.0};               // [m/s^2]
  double a_y_meas{0.0};               // [m/s^2]
  double yaw_rate{0.0};               // [rad/s], positive = left turn
  double wheel_speed[4]{0, 0, 0, 0};  // angular speed FL,FR,RL,RR [rad/s]
  double engine_speed{0.0};           // [rpm]
  int gear_engaged{0};                // 0 = neutral
  double p_brake_meas_front{0.0};     // [Pa]
  double p_brake_meas_rear{0.0};      // [Pa]
  double throttle_meas{0.0};          // [0,1]
  double disc_temp_front{25.0};       // [degC]
  double disc_temp_rear{25.0};        // [degC]
  int lap_count{0};
};

// One preview sample of the planned motion, t_offset seconds from now.
struct TrajectoryPoint {
  double t_offset{0.0};     // [s], strictly increasing along a trajectory
  double v_target{0.0};     // [m/s], >= 0
  double a_y_planned{0.0};  // [m/s^2]
  double a_x_planned{0.0};  // [m/s^2]
};

using Trajectory = std::vector<TrajectoryPoint>;

struct AccelCommand {
  double a_x_target{0.0};  // [m/s^2]
};

// Low-level outputs of the stack. Braking is commanded as non-negative
// per-axle pressure magnitudes; deceleration shows up as negative force
// and acceleration values, never as negative pressure.
struct ActuationCommand {
  double throttle{0.0};              // [0,1]
  double p_brake_target_front{0.0};  // [Pa]
  double p_brake_target_rear{0.0};   // [Pa]
  int gear_request{1};
};

// Static physical description shared by the controllers and the plant.
// SI units throughout; rpm appears only at the engine-speed boundary.
struct VehicleParams {
  double m{800.0};                 // vehicle mass [kg]
  double J_drivetrain{9.0};        // drivetrain inertia referred to rear wheels [kg m^2]
  double r_wheel_front{0.28};      // nominal front wheel radius [m]
  double r_wheel_rear{0.30};       // nominal rear wheel radius [m]
  std::vector<double> gear_ratios{3.40, 2.74, 2.25, 1.86, 1.55, 1.30};
  double tau_final_drive{2.80};
  double eta_drivetrain{0.90};     // drive-path efficiency (0,1]
  double d_bore{0.04};             // brake piston bore diameter [m]
  double mu_brake{0.45};           // pad friction coefficient
  double r_lever{0.15};            // mean brake lever radius [m]
  double brake_bias_front{0.58};   // front share of total brake force (0,1)
  double c_d_A{1.20};              // drag area [m^2]
  double rho_air{1.20};            // [kg/m^3]
  double c_rr{0.015};              // rolling resistance coefficient
  double c_l_A{4.00};              // downforce area [m^2]
  double g{9.81};                  // [m/s^2]
  double wheelbase{3.00};          // [m]
  double track_front{1.60};        // [m]
  double track_rear{1.55};         // [m]
  double cog_to_front{1.40};       // [m]
  double rev_limit{9500.0};        // [rpm]
  double idle_speed{1800.0};       // [rpm]
  double downshift_rpm{5500.0};    // [rpm]
  double upshift_rpm{8800.0};      // [rpm]
  double overrev_block_rpm{9300.0};  // [rpm]

  int gear_count() const { return static_cast<int>(gear_ratios.size()); }
};

// Validation rejects invalid values instead of clamping; clamping is a
// controller decision, not a data decision.
void validate(const VehicleParams& p);
void validate(const VehicleState& vs, const VehicleParams& p);
void validate(const Trajectory& traj);
void validate(const ActuationCommand& cmd, const VehicleParams& p, double p_hydraulic_max);

// Gearbox ratio for a 1-based gear number. Throws std::invalid_argument
// for gear 0 (neutral) or out-of-range gears.
double gear_ratio(const VehicleParams& p, int gear);

// Engine speed implied by vehicle speed through the closed driveline:
// omega_eng = v / r_wheel_rear * tau_gearbox(gear) * tau_final_drive.
double engine_speed_from_velocity(double v, int gear, const VehicleParams& p);

}  // namespace longctrl
