#include "sdiov/pid.hpp"

#include <algorithm>
#include <cmath>

#include "sdiov/errors.hpp"

namespace sdiov {

void validate(const PidState& s) {
  if (!(s.dt > 0.0)) throw ValidationError("dt", "must be > 0");
  if (s.gains.kp < 0.0 || s.gains.ki < 0.0 || s.gains.kd < 0.0) {
    throw ValidationError("gains", "must be >= 0");
  }
  if (!(s.integral_limit > 0.0)) throw ValidationError("integral_limit", "must be > 0");
}

namespace {

double error_of(const PidState& s, double measurement) {
  return s.action == PidAction::Reverse ? s.setpoint - measurement : measurement - s.setpoint;
}

}  // namespace

std::pair<PidState, double> pid_step(PidState s, double measurement, bool hold_integral) {
  const double error = error_of(s, measurement);
  if (!hold_integral) {
    s.integral = std::clamp(s.integral + error * s.dt, -s.integral_limit, s.integral_limit);
  }
  const double derivative = s.primed ? (error - s.prev_error) / s.dt : 0.0;
  const double control = s.gains.kp * error + s.gains.ki * s.integral + s.gains.kd * derivative;
  s.prev_error = error;
  s.last_output = control;
  s.primed = true;
  return {s, control};
}

bool threshold_saturated(const PidState& s, double threshold, double measurement) {
  const double error = error_of(s, measurement);
  return (threshold >= kThresholdMax && error > 0.0) || (threshold <= kThresholdMin && error < 0.0);
}

double apply_threshold_filter(double threshold, double control) {
  const double moved = threshold + control;
  // NaN never reaches the actuator.
  if (std::isnan(moved)) return std::clamp(threshold, kThresholdMin, kThresholdMax);
  return std::clamp(moved, kThresholdMin, kThresholdMax);
}

bool closed_loop_settles(FirstOrderPlant plant, PidState state, int max_steps, double tolerance) {
  int settled_at = -1;
  for (int k = 0; k < max_steps; ++k) {
    auto [next, u] = pid_step(state, plant.x);
    state = next;
    plant.step(u, state.dt);
    if (!std::isfinite(plant.x)) return false;
    const bool inside = std::abs(plant.x - state.setpoint) < tolerance;
    if (inside && settled_at < 0) settled_at = k;
    if (!inside) settled_at = -1;
  }
  return settled_at >= 0;
}

}  // namespace sdiov
