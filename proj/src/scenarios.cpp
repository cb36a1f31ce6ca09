#include "longctrl/scenarios.hpp"

#include <algorithm>
#include <cmath>

namespace longctrl {

Profile generate_profile(double v0, const std::vector<ProfileSegment>& segments,
                         double dt_sample) {
  if (dt_sample <= 0.0) throw ConfigError("profile: dt_sample must be > 0");
  Profile out;
  double t = 0.0;
  double v = std::max(0.0, v0);
  out.push_back({t, v, segments.empty() ? 0.0 : segments.front().a_x_start,
                 segments.empty() ? 0.0 : segments.front().a_y_start});
  for (const ProfileSegment& seg : segments) {
    if (seg.duration <= 0.0) throw ConfigError("profile: segment duration must be > 0");
    const int n = std::max(1, static_cast<int>(std::ceil(seg.duration / dt_sample)));
    const double h = seg.duration / n;
    for (int i = 1; i <= n; ++i) {
      const double s0 = static_cast<double>(i - 1) / n;
      const double s1 = static_cast<double>(i) / n;
      const double a0 = seg.a_x_start + (seg.a_x_end - seg.a_x_start) * s0;
      double a1 = seg.a_x_start + (seg.a_x_end - seg.a_x_start) * s1;
      v += 0.5 * (a0 + a1) * h;
      if (v < 0.0) {
        v = 0.0;
        a1 = 0.0;  // plan cannot go backward; hold at standstill
      }
      t += h;
      const double ay = seg.a_y_start + (seg.a_y_end - seg.a_y_start) * s1;
      out.push_back({t, v, a1, ay});
    }
  }
  return out;
}

ProfilePoint sample_profile(const Profile& profile, double t) {
  if (profile.empty()) throw ConfigError("profile: empty");
  if (t <= profile.front().t) return profile.front();
  if (t >= profile.back().t) {
    ProfilePoint p = profile.back();
    p.t = t;
    return p;
  }
  auto it = std::upper_bound(profile.begin(), profile.end(), t,
                             [](double value, const ProfilePoint& p) { return value < p.t; });
  const ProfilePoint& hi = *it;
  const ProfilePoint& lo = *(it - 1);
  const double w = (t - lo.t) / (hi.t - lo.t);
  ProfilePoint p;
  p.t = t;
  p.v = lo.v + w * (hi.v - lo.v);
  p.a_x = lo.a_x + w * (hi.a_x - lo.a_x);
  p.a_y = lo.a_y + w * (hi.a_y - lo.a_y);
  return p;
}

void RunnerRates::validate() const {
  const double all[] = {gear, warmup, longitudinal, bpc, plant};
  for (double r : all) {
    if (r <= 0.0) throw ConfigError("rates: all rates must be > 0");
  }
  for (double r : all) {
    if (r > plant + 1e-9) throw ConfigError("rates: plant rate must be >= all controller rates");
    const double periods = plant / r;
    if (std::abs(periods - std::round(periods)) > 1e-9) {
      throw ConfigError("rates: plant rate must be an integer multiple of every module rate");
    }
  }
  // Integer-multiple chain across the sorted rates so every pair of module
  // ticks stays aligned.
  std::vector<double> sorted(std::begin(all), std::end(all));
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const double q = sorted[i] / sorted[i - 1];
    if (std::abs(q - std::round(q)) > 1e-9) {
      throw ConfigError("rates: rates must be integer multiples of each other");
    }
  }
}

void ScenarioConfig::validate() const {
  if (profile.empty()) throw ConfigError("scenario.profile: trajectory must not be empty");
  if (duration <= 0.0) throw ConfigError("scenario.duration: must be > 0");
  if (v0 < 0.0) throw ConfigError("scenario.v0: must be >= 0");
  if (gear0 < 1) throw ConfigError("scenario.gear0: must be >= 1");
  if (velocity_tracking_gain < 0.0)
    throw ConfigError("scenario.velocity_tracking_gain: must be >= 0");
  rates.validate();
  for (std::size_t i = 1; i < profile.size(); ++i) {
    if (profile[i].t <= profile[i - 1].t)
      throw ConfigError("scenario.profile: time must be strictly increasing");
  }
}

std::vector<std::string> builtin_scenario_names() {
  return {"straight_brake", "launch", "chicane", "straight_corner", "warmup_laps"};
}

ScenarioConfig make_builtin_scenario(const std::string& name, StackConfig* stack) {
  ScenarioConfig scn;
  scn.name = name;
  if (name == "straight_brake") {
    // Hard stop on slick tarmac; the demand far exceeds grip so the wheels
    // lock without ABS. The pedal ramps in over half a second and the pure
    // acceleration replay keeps the demand saturated down to standstill
    // (the resistive share shrinks with speed, so the requested brake force
    // only grows during the stop).
    scn.v0 = 40.0;
    scn.gear0 = 4;
    scn.duration = 10.0;
    scn.velocity_tracking_gain = 0.0;
    scn.profile = generate_profile(scn.v0, {{0.5, 0.0, 0.0, 0.0, 0.0},
                                            {0.5, 0.0, -20.0, 0.0, 0.0},
                                            {9.0, -20.0, -20.0, 0.0, 0.0}});
    if (stack != nullptr) {
      stack->plant.tire_front.mu_road = 0.5;
      stack->plant.tire_rear.mu_road = 0.5;
    }
  } else if (name == "launch") {
    // Corner-exit style launch on a slippery surface; demand exceeds rear
    // grip for several seconds.
    scn.v0 = 4.0;
    scn.gear0 = 1;
    scn.duration = 6.0;
    scn.profile = generate_profile(scn.v0, {{0.3, 0.0, 0.0, 0.0, 0.0},
                                            {3.0, 10.0, 10.0, 0.0, 0.0},
                                            {2.7, 3.0, 3.0, 0.0, 0.0}});
    if (stack != nullptr) {
      stack->plant.tire_front.mu_road = 0.45;
      stack->plant.tire_rear.mu_road = 0.45;
    }
  } else if (name == "chicane") {
    // Launch, hard braking spike, left-right flick, engine-drag coast,
    // corner exit. Longitudinal targets span -25..+8 m/s^2.
    scn.v0 = 15.0;
    scn.gear0 = 2;
    scn.duration = 17.5;
    scn.profile = generate_profile(
        scn.v0, {{1.0, 0.0, 0.0, 0.0, 0.0},      // cruise
                 {2.5, 0.0, 8.0, 0.0, 0.0},      // ramp onto full acceleration
                 {2.2, 8.0, 8.0, 0.0, 0.0},      // long pull
                 {1.5, 8.0, 0.0, 0.0, 0.0},      // ease off
                 {0.6, 0.0, 0.0, 0.0, 0.0},      // settle ~48.6 m/s
                 {0.3, 0.0, -25.0, 0.0, 0.0},    // jump on the brakes
                 {0.2, -25.0, -25.0, 0.0, 0.0},  // peak deceleration
                 {0.4, -25.0, -14.0, 0.0, 0.0},
                 {0.8, -14.0, -14.0, 0.0, 0.0},
                 {0.3, -14.0, -2.0, 0.0, 0.0},
                 {0.3, -2.0, 0.0, 0.0, 15.0},    // turn-in left
                 {1.5, 0.0, 0.0, 15.0, 15.0},
                 {0.4, 0.0, 0.0, 15.0, -15.0},   // flick to the right
                 {1.2, 0.0, 0.0, -15.0, -15.0},
                 {0.3, 0.0, -1.0, -15.0, 0.0},
                 {1.5, -1.0, -1.0, 0.0, 0.0},    // coast on engine drag
                 {1.0, -1.0, 6.0, 0.0, 0.0},
                 {1.5, 6.0, 6.0, 0.0, 0.0}});    // corner exit
  } else if (name == "straight_corner") {
    // Braking from high speed into a long constant-radius corner with light
    // trail braking, then corner exit. Exercises the gear strategies.
    scn.v0 = 46.0;
    scn.gear0 = 4;
    scn.duration = 7.5;
    scn.profile = generate_profile(
        scn.v0, {{0.8, 0.0, 0.0, 0.0, 0.0},
                 {1.1, -12.0, -12.0, 0.0, 0.0},
                 {0.4, -12.0, -4.0, 0.0, 0.0},
                 {0.4, -4.0, -2.0, 0.0, 15.0},   // turn-in
                 {2.8, -2.0, -2.0, 15.0, 15.0},  // corner with trail braking
                 {0.4, -2.0, 3.0, 15.0, 0.0},    // unwind
                 {1.6, 3.0, 3.0, 0.0, 0.0}});
  } else if (name == "warmup_laps") {
    scn.v0 = 28.0;
    scn.gear0 = 3;
    scn.duration = 200.0;
    scn.warmup_enabled = true;
    scn.profile = generate_profile(scn.v0, {{200.0, 0.0, 0.0, 0.0, 0.0}});
    if (stack != nullptr) {
      stack->plant.lap_length = 1400.0;
    }
  } else {
    throw ConfigError("scenario: unknown built-in '" + name + "'");
  }
  return scn;
}

}  // namespace longctrl
