#include "sdiov/batch.hpp"

#include <exception>

namespace sdiov {

RunResult run_scenario(const ScenarioConfig& config, bool keep_logs) {
  Simulation sim(config, keep_logs);
  RunResult out;
  out.records.reserve(sim.total_ticks());
  while (!sim.finished()) out.records.push_back(sim.tick());

  auto& s = out.summary;
  s = summarize(out.records);
  s.name = config.name;
  s.mode = to_string(config.mode);
  s.seed = config.seed;
  s.vehicle_count = config.traffic.vehicle_count;
  s.duration_s = config.duration_s;
  const auto& c = sim.world().counters;
  s.migrations = c.migrations;
  s.power_ons = c.power_ons;
  s.power_offs = c.power_offs;
  const auto& ops = sim.module_counters();
  s.monitoring_ops = ops.monitoring;
  s.estimation_ops = ops.estimation;
  s.pid_ops = ops.pid;
  s.selection_ops = ops.selection;
  s.planning_ops = ops.planning;

  out.decisions = sim.decisions();
  out.plans = sim.plans();
  return out;
}

std::vector<ScenarioSummary> run_batch_serial(const std::vector<ScenarioConfig>& configs) {
  std::vector<ScenarioSummary> out;
  out.reserve(configs.size());
  for (const auto& c : configs) out.push_back(run_scenario(c, false).summary);
  return out;
}

std::vector<RunResult> run_all_parallel(const std::vector<ScenarioConfig>& configs, bool keep_logs) {
  std::vector<RunResult> out(configs.size());
  std::exception_ptr failure;
  const long n = static_cast<long>(configs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    try {
      out[i] = run_scenario(configs[i], keep_logs);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::vector<ScenarioSummary> run_batch_parallel(const std::vector<ScenarioConfig>& configs) {
  std::vector<ScenarioSummary> out(configs.size());
  std::exception_ptr failure;
  const long n = static_cast<long>(configs.size());
  // Runs differ a lot in length, so hand them out one at a time.
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    try {
      out[i] = run_scenario(configs[i], false).summary;
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::vector<ScenarioConfig> sweep_configs(const ScenarioConfig& base) {
  std::vector<ScenarioConfig> out;
  for (const auto& level : preset_names()) {
    for (const Mode m : {Mode::Proposed, Mode::Traditional}) {
      ScenarioConfig c = base;
      c.name = level;
      c.traffic.vehicle_count = *preset_vehicle_count(level);
      c.mode = m;
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace sdiov
