#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sdiov/ids.hpp"
#include "sdiov/topology.hpp"

namespace sdiov {

enum class PowerState { On, Off };

// A multimedia server.
struct PhysicalMachine {
  PmId id;
  std::string name;
  double cpu_capacity = 1000.0;  // abstract CPU units per second
  PowerState power_state = PowerState::On;
  // Scheduled to power off once its outgoing migrations complete.
  bool draining = false;
  std::vector<VnfId> hosted_vnfs;
  std::size_t active_connections = 0;
  double response_time_ms = 10.0;  // exponentially smoothed
  double cpu_utilization = 0.0;    // always in [0, 1]
  double backlog = 0.0;            // queued work, CPU units

  bool is_on() const { return power_state == PowerState::On; }
};

struct Migration {
  PmId destination;
  double completes_at = 0.0;
};

// A virtualized multimedia function; the unit of migration.
struct Vnf {
  VnfId id;
  double cpu_demand = 25.0;  // consumed while the instance serves at least one flow
  PmId host;
  std::optional<Migration> migration;
};

enum class FlowStatus { Pending, Active, Completed, Rejected, Lost };

// One vehicle's multimedia session.
struct FlowRequest {
  RequestId id;
  std::uint32_t vehicle_id = 0;
  std::size_t rsu = 0;
  double arrival_time = 0.0;
  double duration = 1.0;
  double cpu_demand = 1.0;
  double bandwidth_mbps = 1.0;
  std::optional<PmId> assigned_pm;
  std::optional<VnfId> vnf;
  Path path;
  FlowStatus status = FlowStatus::Pending;
  std::optional<double> last_delay_ms;

  double end_time() const { return arrival_time + duration; }
};

// Actuated thresholds driven by the two PID loops; both stay in [0.2, 0.8].
struct ThresholdState {
  double load_threshold = 0.5;
  double temperature_threshold = 0.5;
};

}  // namespace sdiov
