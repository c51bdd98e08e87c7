#pragma once

namespace sdiov {

struct QosParams {
  double base_queueing_ms = 5.0;  // d0
  double queueing_epsilon = 0.01;
  friend bool operator==(const QosParams&, const QosParams&) = default;
};

// Queueing delay at a server running at utilization u: d0 * u / (1 - u + eps).
inline double queueing_delay_ms(double utilization, const QosParams& q) {
  return q.base_queueing_ms * utilization / (1.0 - utilization + q.queueing_epsilon);
}

}  // namespace sdiov
