#pragma once

#include <utility>

namespace sdiov {

// Reverse action regulates toward a setpoint with error = setpoint - measurement.
// Direct action flips the sign (error = measurement - setpoint), so the output
// grows with the measured value.
enum class PidAction { Reverse, Direct };

struct PidGains {
  double kp = 0.5;
  double ki = 0.1;
  double kd = 0.05;
  friend bool operator==(const PidGains&, const PidGains&) = default;
};

struct PidState {
  PidGains gains;
  double setpoint = 0.6;
  double dt = 1.0;
  double integral_limit = 10.0;
  PidAction action = PidAction::Reverse;

  double integral = 0.0;
  double prev_error = 0.0;
  double last_output = 0.0;
  bool primed = false;  // false until the first step
};

// Validates gains, dt and the anti-windup bound; throws ValidationError.
void validate(const PidState& state);

inline constexpr double kThresholdMin = 0.2;
inline constexpr double kThresholdMax = 0.8;

// Rectangular integral with anti-windup clamp, backward-difference
// derivative on the error (zero on the first call). When hold_integral is
// set the integral keeps its value for this step.
std::pair<PidState, double> pid_step(PidState state, double measurement, bool hold_integral = false);

// clamp(threshold + control, 0.2, 0.8).
double apply_threshold_filter(double threshold, double control);

// Conditional integration: true when the threshold already sits on a bound
// and this step's error would push the integral further toward it.
bool threshold_saturated(const PidState& state, double threshold, double measurement);

// Test plant x' = (u - x) / tau, integrated with forward Euler at the PID's dt.
struct FirstOrderPlant {
  double tau = 5.0;
  double x = 0.0;

  double step(double input, double dt) {
    x += dt * (input - x) / tau;
    return x;
  }
};

// True iff the loop brings |x - setpoint| under tolerance within max_steps
// and stays there for the rest of the horizon.
bool closed_loop_settles(FirstOrderPlant plant, PidState state, int max_steps = 200,
                         double tolerance = 0.02);

}  // namespace sdiov
