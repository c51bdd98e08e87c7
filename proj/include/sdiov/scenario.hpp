#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sdiov/pid.hpp"
#include "sdiov/qos.hpp"
#include "sdiov/topology.hpp"

namespace sdiov {

enum class Mode { Proposed, Traditional };

const char* to_string(Mode m);
Mode mode_from_string(const std::string& s);  // throws ValidationError

struct ControllerParams {
  double target_load = 0.6;         // TL
  double target_temperature = 0.6;  // TT
  PidGains load_gains;
  PidGains temperature_gains;
  double dt = 1.0;
  double integral_limit = 10.0;
  double delta = 0.0;
  double theta = 0.0;
  double alpha = 0.2;
  double beta = 0.8;
  double deadband = 0.05;
  std::size_t window = 8;  // phi
  double zeta = 0.5;       // workload predictor step size
  double xi = 0.5;         // CPU predictor step size
  double migration_delay_s = 0.5;
  std::optional<double> consolidation_ceiling;
  std::size_t startup_hold = 8;  // VNF controller periods before the first plan

  friend bool operator==(const ControllerParams&, const ControllerParams&) = default;
};

struct TrafficParams {
  std::uint32_t vehicle_count = 900;
  double request_rate_per_vehicle = 1.0 / 30.0;  // sessions per second
  double mean_duration_s = 30.0;
  double cpu_demand_min = 0.5;  // CPU units/s per session, before intensity
  double cpu_demand_max = 1.5;
  double bandwidth_min_mbps = 0.5;
  double bandwidth_max_mbps = 1.5;
  // Per-vehicle activity is log-normal with mean 1 and this sigma; it scales
  // the vehicle's session rate. Each session attaches to a uniformly chosen RSU.
  double intensity_sigma = 1.5;

  friend bool operator==(const TrafficParams&, const TrafficParams&) = default;
};

struct ServerParams {
  double cpu_capacity = 1000.0;
  std::size_t vnfs_per_server = 6;
  double vnf_cpu_demand = 25.0;
  double backlog_bound_s = 2.0;
  double response_time_smoothing = 0.3;
  double response_time_initial_ms = 10.0;

  friend bool operator==(const ServerParams&, const ServerParams&) = default;
};

struct PowerParams {
  double idle_w = 100.0;
  double peak_w = 250.0;
  friend bool operator==(const PowerParams&, const PowerParams&) = default;
};

struct OutputParams {
  std::string dir = "out";
  bool plot = false;
  friend bool operator==(const OutputParams&, const OutputParams&) = default;
};

struct ScenarioConfig {
  std::string name = "default";
  double duration_s = 600.0;
  std::uint64_t seed = 1;
  Mode mode = Mode::Proposed;
  bool default_topology = true;
  Topology topology = build_default_topology();
  ControllerParams controller;
  TrafficParams traffic;
  ServerParams servers;
  PowerParams power;
  QosParams qos;
  OutputParams output;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

// Named load levels: very_low=300, low=600, medium=900, high=1200, very_high=1500.
std::optional<std::uint32_t> preset_vehicle_count(const std::string& name);
const std::vector<std::string>& preset_names();

// Throws ValidationError naming the first offending field.
void validate(const ScenarioConfig& config);

}  // namespace sdiov
