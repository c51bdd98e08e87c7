#pragma once

#include <vector>

#include "sdiov/engine.hpp"
#include "sdiov/metrics.hpp"
#include "sdiov/scenario.hpp"

namespace sdiov {

struct RunResult {
  ScenarioSummary summary;
  std::vector<MetricsRecord> records;
  std::vector<DecisionRecord> decisions;
  std::vector<PlanRecord> plans;
};

// Runs one scenario to completion. With keep_logs false only the summary and
// per-tick records are kept.
RunResult run_scenario(const ScenarioConfig& config, bool keep_logs = true);

// Summaries for a list of independent scenarios, in input order.
// The serial version is the reference; the parallel one spreads scenarios
// over OpenMP threads and must return identical summaries.
std::vector<ScenarioSummary> run_batch_serial(const std::vector<ScenarioConfig>& configs);
std::vector<ScenarioSummary> run_batch_parallel(const std::vector<ScenarioConfig>& configs);

// Full results, also in parallel. Used by the CLI sweep, which writes per-run files.
std::vector<RunResult> run_all_parallel(const std::vector<ScenarioConfig>& configs, bool keep_logs);

// Every preset load level under both modes, one entry per (level, mode),
// levels in ascending order and proposed before traditional.
std::vector<ScenarioConfig> sweep_configs(const ScenarioConfig& base);

}  // namespace sdiov
