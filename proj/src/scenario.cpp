#include "sdiov/scenario.hpp"

#include <cmath>

#include "sdiov/errors.hpp"

namespace sdiov {

const char* to_string(Mode m) { return m == Mode::Proposed ? "proposed" : "traditional"; }

Mode mode_from_string(const std::string& s) {
  if (s == "proposed") return Mode::Proposed;
  if (s == "traditional") return Mode::Traditional;
  throw ValidationError("mode", "must be proposed or traditional, got '" + s + "'");
}

namespace {

const std::vector<std::pair<std::string, std::uint32_t>>& presets() {
  static const std::vector<std::pair<std::string, std::uint32_t>> p = {
      {"very_low", 300}, {"low", 600}, {"medium", 900}, {"high", 1200}, {"very_high", 1500}};
  return p;
}

void require(bool ok, const char* field, const char* what) {
  if (!ok) throw ValidationError(field, what);
}

bool finite(double x) { return std::isfinite(x); }

void check_gains(const PidGains& g, const char* field) {
  require(finite(g.kp) && finite(g.ki) && finite(g.kd), field, "gains must be finite");
  require(g.kp >= 0 && g.ki >= 0 && g.kd >= 0, field, "gains must be non-negative");
}

}  // namespace

std::optional<std::uint32_t> preset_vehicle_count(const std::string& name) {
  for (const auto& [n, v] : presets()) {
    if (n == name) return v;
  }
  return std::nullopt;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& p : presets()) out.push_back(p.first);
    return out;
  }();
  return names;
}

void validate(const ScenarioConfig& c) {
  require(finite(c.duration_s) && c.duration_s > 0, "duration_s", "must be positive");
  const auto& k = c.controller;
  require(finite(k.dt) && k.dt > 0, "controller.dt", "must be positive");
  require(c.duration_s >= k.dt, "duration_s", "must cover at least one control period");
  require(finite(k.target_load) && k.target_load >= 0 && k.target_load <= 1, "controller.target_load",
          "must lie in [0, 1]");
  require(finite(k.target_temperature) && k.target_temperature >= 0 && k.target_temperature <= 1,
          "controller.target_temperature", "must lie in [0, 1]");
  check_gains(k.load_gains, "controller.load_gains");
  check_gains(k.temperature_gains, "controller.temperature_gains");
  require(finite(k.integral_limit) && k.integral_limit > 0, "controller.integral_limit", "must be positive");
  require(finite(k.delta), "controller.delta", "must be finite");
  require(finite(k.theta), "controller.theta", "must be finite");
  require(finite(k.alpha) && finite(k.beta) && 0 <= k.alpha && k.alpha < k.beta && k.beta <= 1,
          "controller.alpha", "need 0 <= alpha < beta <= 1");
  require(finite(k.deadband) && k.deadband >= 0, "controller.deadband", "must be non-negative");
  require(k.window >= 2, "controller.window", "must be at least 2");
  require(finite(k.zeta) && k.zeta > 0 && k.zeta < 2, "controller.zeta", "must lie in (0, 2)");
  require(finite(k.xi) && k.xi > 0 && k.xi < 2, "controller.xi", "must lie in (0, 2)");
  require(finite(k.migration_delay_s) && k.migration_delay_s >= 0, "controller.migration_delay_s",
          "must be non-negative");
  if (k.consolidation_ceiling) {
    require(finite(*k.consolidation_ceiling) && *k.consolidation_ceiling > 0 && *k.consolidation_ceiling <= 1,
            "controller.consolidation_ceiling", "must lie in (0, 1]");
  }

  const auto& t = c.traffic;
  require(finite(t.request_rate_per_vehicle) && t.request_rate_per_vehicle > 0,
          "traffic.request_rate_per_vehicle", "must be positive");
  require(finite(t.mean_duration_s) && t.mean_duration_s > 0, "traffic.mean_duration_s", "must be positive");
  require(finite(t.cpu_demand_min) && t.cpu_demand_min >= 0 && t.cpu_demand_max >= t.cpu_demand_min &&
              finite(t.cpu_demand_max),
          "traffic.cpu_demand_min", "need 0 <= min <= max");
  require(finite(t.bandwidth_min_mbps) && t.bandwidth_min_mbps >= 0 && finite(t.bandwidth_max_mbps) &&
              t.bandwidth_max_mbps >= t.bandwidth_min_mbps,
          "traffic.bandwidth_min_mbps", "need 0 <= min <= max");
  require(finite(t.intensity_sigma) && t.intensity_sigma >= 0, "traffic.intensity_sigma",
          "must be non-negative");

  const auto& s = c.servers;
  require(finite(s.cpu_capacity) && s.cpu_capacity > 0, "servers.cpu_capacity", "must be positive");
  require(s.vnfs_per_server >= 1, "servers.vnfs_per_server", "must be at least 1");
  require(finite(s.vnf_cpu_demand) && s.vnf_cpu_demand >= 0, "servers.vnf_cpu_demand", "must be non-negative");
  require(finite(s.backlog_bound_s) && s.backlog_bound_s >= 0, "servers.backlog_bound_s",
          "must be non-negative");
  require(finite(s.response_time_smoothing) && s.response_time_smoothing > 0 && s.response_time_smoothing <= 1,
          "servers.response_time_smoothing", "must lie in (0, 1]");
  require(finite(s.response_time_initial_ms) && s.response_time_initial_ms >= 0,
          "servers.response_time_initial_ms", "must be non-negative");

  require(finite(c.power.idle_w) && c.power.idle_w >= 0, "power.idle_w", "must be non-negative");
  require(finite(c.power.peak_w) && c.power.peak_w >= c.power.idle_w, "power.peak_w", "must be >= idle_w");
  require(finite(c.qos.base_queueing_ms) && c.qos.base_queueing_ms >= 0, "qos.base_queueing_ms",
          "must be non-negative");
  require(finite(c.qos.queueing_epsilon) && c.qos.queueing_epsilon > 0, "qos.queueing_epsilon",
          "must be positive");

  try {
    c.topology.validate();
  } catch (const ValidationError&) {
    throw;
  } catch (const Error& e) {
    throw ValidationError("topology", e.what());
  }
  require(!c.topology.rsus().empty(), "topology", "needs at least one RSU");
  require(!c.topology.servers().empty(), "topology", "needs at least one server");
}

}  // namespace sdiov
