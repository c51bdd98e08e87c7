#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "sdiov/domain.hpp"
#include "sdiov/pid.hpp"
#include "sdiov/predictor.hpp"
#include "sdiov/qos.hpp"
#include "sdiov/rng.hpp"

namespace sdiov {

// Per-server view used for placement.
struct PmStats {
  PmId pm;
  double utilization = 0.0;
  std::size_t connections = 0;
  double response_time_ms = 0.0;
  double cpu_capacity = 1.0;
  // On, not draining, and hosting a VNF that can take new sessions.
  bool accepting = true;
};

using Snapshot = std::vector<PmStats>;

// Exponential smoothing of observed response times: prev + factor (sample - prev).
inline double smooth_response_time(double prev_ms, double sample_ms, double factor) {
  return prev_ms + factor * (sample_ms - prev_ms);
}

enum class Policy { LeastConnection, LeastResponseTime, StaticHash };

const char* to_string(Policy p);

struct FlowControllerParams {
  double target_load = 0.6;  // TL
  PidGains gains;
  double dt = 1.0;
  double integral_limit = 10.0;
  double delta = 0.0;  // switch threshold on u
  std::size_t window = 8;
  double step_size = 0.5;  // zeta
  QosParams qos;
};

struct FlowControllerState {
  explicit FlowControllerState(const FlowControllerParams& params = {});

  FlowControllerParams params;
  std::map<PmId, NlmsState> per_pm_predictors;
  PidState pid;
  double last_system_load_estimate = 0.0;
  double load_threshold = 0.5;
  double last_u = 0.0;
  bool first_decision_made = false;
};

struct Decision {
  RequestId request;
  std::optional<PmId> pm;  // empty => rejected
  Policy policy = Policy::LeastConnection;
  double u = 0.0;
};

struct FlowTickResult {
  std::vector<Decision> decisions;
  double system_load_estimate = 0.0;
  double u = 0.0;
  double load_threshold = 0.0;
};

// Snapshot of every On server, sorted by id.
Snapshot collect_statistics(std::span<const PhysicalMachine> pms, std::span<const Vnf> vnfs);

// Feeds each On server's utilization to its predictor and returns the mean
// one-step prediction. Predictors are created and dropped to track the On set.
// Throws NoActivePm on an empty snapshot.
double estimate_system_load(FlowControllerState& state, const Snapshot& snapshot);

// Minimum connections among accepting servers, ties to the lowest id.
PmId least_connection(const Snapshot& snapshot);
// On the very first placement with every count at zero, the choice is uniform
// over accepting servers instead.
PmId least_connection(const Snapshot& snapshot, Rng& rng, bool initial);

// Minimum smoothed response time among accepting servers, ties to lowest id.
PmId least_response_time(const Snapshot& snapshot);

// u >= delta selects least-connection, otherwise least-response-time.
Policy policy_for(double u, double delta);
PmId select_pm(const Snapshot& snapshot, double u, double delta);

// Applies one placement to the snapshot so later requests in the same tick
// see it: the count goes up by one and utilization and response time move by
// the request's projected share.
void account_assignment(PmStats& stats, double cpu_demand, const QosParams& qos);

// One control period: statistics, load estimate, PID, threshold filter, and a
// decision for every pending request in order.
FlowTickResult flow_tick(FlowControllerState& state, std::span<const PhysicalMachine> pms,
                         std::span<const Vnf> vnfs, std::span<const FlowRequest> pending, Rng& rng);

}  // namespace sdiov
