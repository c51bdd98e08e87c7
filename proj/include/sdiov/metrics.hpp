#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sdiov {

struct PmSample {
  bool on = false;
  double utilization = 0.0;
  double power_w = 0.0;
  std::size_t connections = 0;
  std::size_t vnfs = 0;
};

// One control period. Request counters are cumulative since the start of the
// run; everything else describes the period itself.
struct MetricsRecord {
  std::uint64_t tick = 0;
  double time_s = 0.0;
  std::vector<PmSample> per_pm;
  std::vector<double> per_switch_utilization;

  std::uint64_t offered = 0;
  std::uint64_t served = 0;
  std::uint64_t rejected = 0;
  std::uint64_t lost = 0;
  std::uint64_t in_flight = 0;

  std::size_t active_flows = 0;
  double mean_delay_ms = 0.0;
  double mean_jitter_ms = 0.0;
  double mean_setup_ms = 0.0;
  double loss_fraction = 0.0;  // sessions lost this period / sessions carried
  double r_factor = 0.0;
  double mos = 0.0;

  double system_temperature = 0.0;
  std::size_t on_pm_count = 0;
  std::size_t vnf_count = 0;
  double pm_spread_pp = 0.0;
  double switch_spread_pp = 0.0;
  double total_power_w = 0.0;
  double energy_j = 0.0;

  double load_estimate = 0.0;
  double u = 0.0;
  double w = 0.0;
  double load_threshold = 0.0;
  double temperature_threshold = 0.0;
};

// Simplified E-model: R = 93.2 - Id - Ie with
// Id = 0.024 d + 0.11 max(0, d - 177.3) and Ie = 30 ln(1 + 15 loss), clamped to [0, 100].
double r_factor(double delay_ms, double loss_fraction);

// MOS = 1 + 0.035 R + 7e-6 R (R - 60)(100 - R), never below 1, 4.5 at R >= 100.
double mos(double r);

// max - min utilization in percentage points. Throws NoActivePm when empty.
double balance_spread(std::span<const double> utilizations);

struct ScenarioSummary {
  std::string name;
  std::string mode;
  std::uint64_t seed = 0;
  std::uint32_t vehicle_count = 0;
  double duration_s = 0.0;

  std::size_t ticks = 0;
  double mean_pm_utilization = 0.0;  // over On server-periods
  std::vector<double> pm_mean_utilization;  // each server, over its On periods
  std::vector<double> switch_mean_utilization;
  double mean_pm_spread_pp = 0.0;
  double mean_switch_spread_pp = 0.0;
  double total_energy_kwh = 0.0;
  double mean_power_w = 0.0;
  double mean_on_pms = 0.0;

  std::uint64_t offered = 0;
  std::uint64_t served = 0;
  std::uint64_t rejected = 0;
  std::uint64_t lost = 0;
  std::uint64_t in_flight = 0;
  double goodput = 0.0;    // served / (served + rejected + lost)
  double loss_rate = 0.0;  // lost / (served + rejected + lost)

  double mean_delay_ms = 0.0;
  double mean_jitter_ms = 0.0;
  double mean_setup_ms = 0.0;
  double mean_r_factor = 0.0;
  double mean_mos = 0.0;
  double mean_system_temperature = 0.0;

  // Filled by the runner, not by summarize().
  std::uint64_t migrations = 0;
  std::uint64_t power_ons = 0;
  std::uint64_t power_offs = 0;
  std::uint64_t monitoring_ops = 0;
  std::uint64_t estimation_ops = 0;
  std::uint64_t pid_ops = 0;
  std::uint64_t selection_ops = 0;
  std::uint64_t planning_ops = 0;

  friend bool operator==(const ScenarioSummary&, const ScenarioSummary&) = default;
};

// Time averages and totals. Throws EmptyRun.
ScenarioSummary summarize(std::span<const MetricsRecord> records);

}  // namespace sdiov
