#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sdiov/domain.hpp"
#include "sdiov/flow_controller.hpp"
#include "sdiov/metrics.hpp"
#include "sdiov/rng.hpp"
#include "sdiov/scenario.hpp"
#include "sdiov/vnf_controller.hpp"

namespace sdiov {

struct Vehicle {
  std::uint32_t id = 0;
  double intensity = 1.0;  // multiplies the vehicle's session rate
  double next_arrival = 0.0;
};

struct Counters {
  std::uint64_t offered = 0;
  std::uint64_t served = 0;
  std::uint64_t rejected = 0;
  std::uint64_t lost = 0;
  std::uint64_t migrations = 0;
  std::uint64_t power_ons = 0;
  std::uint64_t power_offs = 0;
};

// Coarse per-module operation counts, a stand-in for controller CPU profiling.
struct ModuleCounters {
  std::uint64_t monitoring = 0;
  std::uint64_t estimation = 0;
  std::uint64_t pid = 0;
  std::uint64_t selection = 0;
  std::uint64_t planning = 0;
};

struct World {
  double clock = 0.0;
  std::uint64_t tick = 0;
  Mode mode = Mode::Proposed;
  Topology topology;
  std::vector<PhysicalMachine> pms;
  std::vector<Vnf> vnfs;
  std::vector<FlowRequest> flows;  // Active sessions
  std::vector<Vehicle> vehicles;
  Rng traffic_rng;
  Rng control_rng;
  Counters counters;
  std::vector<double> link_load_mbps;
  std::vector<double> switch_load_mbps;      // indexed like topology.switches()
  std::vector<double> switch_utilization;    // last measured, same indexing
  std::uint32_t next_request = 0;
};

struct DecisionRecord {
  std::uint64_t tick = 0;
  RequestId request;
  std::optional<PmId> pm;
  Policy policy = Policy::LeastConnection;
  double u = 0.0;
};

struct PlanRecord {
  std::uint64_t tick = 0;
  std::string action;  // power_on, power_off, migrate, or warning
  std::optional<VnfId> vnf;
  std::optional<PmId> src;
  std::optional<PmId> dst;
  double w = 0.0;
  double system_temperature = 0.0;
  std::string note;
};

struct FlowQos {
  double delay_ms = 0.0;
  double jitter_ms = 0.0;
  double setup_ms = 0.0;
  bool lost = false;
};

// Linear server power: 0 when off, idle + (peak - idle) * utilization when on.
double power_draw(const PhysicalMachine& pm, const PowerParams& power);

// Static placement used by the baseline: vehicle id modulo server count.
PmId baseline_assign(std::uint32_t vehicle_id, std::size_t server_count);

// Delay is the path latency plus the server queueing term plus the time to
// drain the server backlog. Jitter is the change from the session's previous
// delay; setup adds one control period of placement latency. Lost when the
// server backlog exceeds its bound or a path link is over capacity.
FlowQos flow_qos(const FlowRequest& flow, const World& world, const ScenarioConfig& config);

// Fixed-step simulation of one scenario under one mode.
class Simulation {
 public:
  explicit Simulation(ScenarioConfig config, bool keep_logs = true);

  // Advances one control period and returns its record.
  MetricsRecord tick();
  bool finished() const;
  std::size_t total_ticks() const;

  const World& world() const { return world_; }
  World& mutable_world() { return world_; }
  const ScenarioConfig& config() const { return config_; }
  const FlowControllerState& flow_controller() const { return flow_state_; }
  const VnfControllerState& vnf_controller() const { return vnf_state_; }
  const ModuleCounters& module_counters() const { return ops_; }
  const std::vector<DecisionRecord>& decisions() const { return decisions_; }
  const std::vector<PlanRecord>& plans() const { return plans_; }

  // Applies a plan to the world: power-ons take effect at once, migrations
  // finish after the configured delay, power-offs wait for the source to empty.
  void apply_plan(const Plan& plan, double w, double system_temp);

  // View handed to the VNF controller.
  WorldView view() const;

 private:
  void generate_arrivals(std::vector<FlowRequest>& pending);
  void place(std::vector<FlowRequest>& pending, double& u, double& load_estimate,
             double& load_threshold);
  void run_vnf_controller(double& w, double& temp_threshold);
  void serve(MetricsRecord& rec);
  void finish_migrations(double until);
  std::optional<VnfId> pick_vnf(PmId pm) const;
  Path route(std::size_t rsu, PmId pm, double bandwidth_mbps);
  const std::vector<Path>& candidate_paths(std::size_t rsu, PmId pm);

  ScenarioConfig config_;
  bool keep_logs_;
  World world_;
  FlowControllerState flow_state_;
  VnfControllerState vnf_state_;
  ModuleCounters ops_;
  std::vector<DecisionRecord> decisions_;
  std::vector<PlanRecord> plans_;
  std::map<std::pair<std::size_t, std::uint32_t>, std::vector<Path>> path_cache_;
  std::vector<std::size_t> switch_index_;  // node index -> position in switches()
  std::vector<std::size_t> flows_on_vnf_;
};

}  // namespace sdiov
