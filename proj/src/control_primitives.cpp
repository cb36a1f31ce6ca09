#include "longctrl/control_primitives.hpp"

#include <algorithm>
#include <cmath>

namespace longctrl {

namespace {

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

// Largest index i with x[i] <= xq, restricted to [0, n-2] so that the
// interpolation interval [x[i], x[i+1]] always exists.
size_t interval_index(const std::vector<double>& x, double xq) {
  auto it = std::upper_bound(x.begin(), x.end(), xq);
  if (it == x.begin()) return 0;
  size_t i = static_cast<size_t>(it - x.begin()) - 1;
  return std::min(i, x.size() - 2);
}

}  // namespace

double clamp01(double v) { return clamp(v, 0.0, 1.0); }

void pid_reset(PidState& state) { state = PidState{}; }

double pid_step(PidState& state, const PidConfig& cfg, double error, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("pid_step: dt must be > 0");
  if (!std::isfinite(error)) throw std::invalid_argument("pid_step: non-finite error");

  if (!state.initialized) {
    state.prev_error = error;  // no derivative kick on the first sample
    state.initialized = true;
  }

  const double d_raw = (error - state.prev_error) / dt;
  const double alpha =
      cfg.tau_derivative_filter > 0.0 ? dt / (cfg.tau_derivative_filter + dt) : 1.0;
  const double derivative = state.prev_derivative + alpha * (d_raw - state.prev_derivative);

  double integrator = state.integrator + error * dt;
  // Keep ki*integrator inside the output limits.
  if (cfg.ki > 0.0) {
    integrator = clamp(integrator, cfg.out_min / cfg.ki, cfg.out_max / cfg.ki);
  } else if (cfg.ki < 0.0) {
    integrator = clamp(integrator, cfg.out_max / cfg.ki, cfg.out_min / cfg.ki);
  }

  const double unclamped = cfg.kp * error + cfg.ki * integrator + cfg.kd * derivative;

  switch (cfg.anti_windup) {
    case AntiWindup::kConditionalIntegration:
      // Freeze the integrator whenever the unclamped output exceeds a
      // limit and the error would push it further out.
      if ((unclamped > cfg.out_max && error > 0.0) ||
          (unclamped < cfg.out_min && error < 0.0)) {
        integrator = state.integrator;
      }
      break;
    case AntiWindup::kBackCalculation: {
      const double saturated = clamp(unclamped, cfg.out_min, cfg.out_max);
      if (cfg.ki != 0.0 && cfg.back_calc_tau > 0.0) {
        integrator = state.integrator + error * dt +
                     (saturated - unclamped) / (cfg.ki * cfg.back_calc_tau) * dt;
      }
      break;
    }
  }

  state.integrator = integrator;
  state.prev_error = error;
  state.prev_derivative = derivative;

  const double out = cfg.kp * error + cfg.ki * integrator + cfg.kd * derivative;
  return clamp(out, cfg.out_min, cfg.out_max);
}

double lowpass_step(double y_prev, double input, double tau, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("lowpass_step: dt must be > 0");
  if (tau < 0.0) throw std::invalid_argument("lowpass_step: tau must be >= 0");
  const double alpha = dt / (tau + dt);
  return y_prev + alpha * (input - y_prev);
}

void Table1D::validate(const std::string& name) const {
  if (x.empty()) throw ConfigError(name + ": empty table");
  if (x.size() != y.size()) throw ConfigError(name + ": breakpoint/value size mismatch");
  for (size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1]))
      throw ConfigError(name + ": breakpoints must be strictly increasing");
  }
}

double Table1D::eval(double xq) const {
  if (x.empty() || x.size() != y.size()) throw ConfigError("table1d: invalid table");
  if (x.size() == 1) return y[0];
  if (xq <= x.front()) return y.front();
  if (xq >= x.back()) return y.back();
  const size_t i = interval_index(x, xq);
  const double t = (xq - x[i]) / (x[i + 1] - x[i]);
  return y[i] + t * (y[i + 1] - y[i]);
}

void Table2D::validate(const std::string& name) const {
  if (x.empty() || y.empty()) throw ConfigError(name + ": empty table");
  if (z.size() != x.size() * y.size())
    throw ConfigError(name + ": grid size does not match axes");
  for (size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1]))
      throw ConfigError(name + ": x breakpoints must be strictly increasing");
  }
  for (size_t i = 1; i < y.size(); ++i) {
    if (!(y[i] > y[i - 1]))
      throw ConfigError(name + ": y breakpoints must be strictly increasing");
  }
}

double Table2D::eval(double xq, double yq) const {
  if (x.empty() || y.empty() || z.size() != x.size() * y.size())
    throw ConfigError("table2d: invalid table");
  const double xc = clamp(xq, x.front(), x.back());
  const double yc = clamp(yq, y.front(), y.back());
  if (x.size() == 1 && y.size() == 1) return z[0];

  const size_t ny = y.size();
  auto at = [&](size_t ix, size_t iy) { return z[ix * ny + iy]; };

  if (x.size() == 1) {
    const size_t j = interval_index(y, yc);
    const double ty = (yc - y[j]) / (y[j + 1] - y[j]);
    return at(0, j) + ty * (at(0, j + 1) - at(0, j));
  }
  if (y.size() == 1) {
    const size_t i = interval_index(x, xc);
    const double tx = (xc - x[i]) / (x[i + 1] - x[i]);
    return at(i, 0) + tx * (at(i + 1, 0) - at(i, 0));
  }

  const size_t i = interval_index(x, xc);
  const size_t j = interval_index(y, yc);
  const double tx = (xc - x[i]) / (x[i + 1] - x[i]);
  const double ty = (yc - y[j]) / (y[j + 1] - y[j]);
  const double z00 = at(i, j), z10 = at(i + 1, j);
  const double z01 = at(i, j + 1), z11 = at(i + 1, j + 1);
  return z00 * (1 - tx) * (1 - ty) + z10 * tx * (1 - ty) + z01 * (1 - tx) * ty +
         z11 * tx * ty;
}

}  // namespace longctrl
