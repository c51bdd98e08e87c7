#pragma once

#include <string>
#include <vector>

#include "sdiov/batch.hpp"
#include "sdiov/metrics.hpp"
#include "sdiov/topology.hpp"

namespace sdiov {

// Column names for the per-tick CSV. Per-server and per-switch fields are
// flattened with the node name as prefix (M1_utilization, S4_utilization).
std::vector<std::string> csv_header(const Topology& topology);

// Header plus one row per record. Numbers use '.' and up to 10 significant
// digits; text is quoted per RFC 4180 when needed.
std::string metrics_csv(const Topology& topology, const std::vector<MetricsRecord>& records);

// One JSON object per line.
std::string summary_json(const ScenarioSummary& summary);
ScenarioSummary summary_from_json(const std::string& line);  // throws ParseError / ValidationError
std::string decisions_jsonl(const std::vector<DecisionRecord>& decisions);
std::string plans_jsonl(const std::vector<PlanRecord>& plans);

struct ComparisonReport {
  std::string name;
  std::uint64_t seed = 0;
  std::uint32_t vehicle_count = 0;
  std::string mode_a;
  std::string mode_b;
  double energy_reduction_pct = 0.0;  // (b - a) / b * 100
  // a - b for the rest.
  double pm_spread_delta_pp = 0.0;
  double switch_spread_delta_pp = 0.0;
  double mos_delta = 0.0;
  double r_factor_delta = 0.0;
  double goodput_delta = 0.0;
  double loss_rate_delta = 0.0;
  double delay_delta_ms = 0.0;
};

// a is usually the proposed run and b the baseline. Throws
// MismatchedScenarios unless name, seed, vehicle count and duration agree.
ComparisonReport compare(const ScenarioSummary& a, const ScenarioSummary& b);
std::string comparison_json(const ComparisonReport& report);

struct Chart {
  std::string family;  // file suffix
  std::string svg;
};

// Static time-series charts: server utilization, switch utilization, power,
// delay/jitter/setup, MOS and R-factor, goodput, controller signals.
std::vector<Chart> charts(const Topology& topology, const std::vector<MetricsRecord>& records,
                          const std::string& title);

// Files are first written next to their targets with a ".tmp" suffix and
// renamed on commit(). Anything not committed is removed on destruction, so
// a failed run leaves no partial outputs behind.
class OutputSet {
 public:
  explicit OutputSet(std::string dir);
  ~OutputSet();
  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;

  // Throws IoError.
  void stage(const std::string& filename, const std::string& content);
  void commit();
  const std::vector<std::string>& committed() const { return done_; }

 private:
  std::string dir_;
  std::vector<std::pair<std::string, std::string>> staged_;  // tmp, final
  std::vector<std::string> done_;
};

// "<name>_<mode>_s<seed>"
std::string run_stem(const ScenarioSummary& summary);

}  // namespace sdiov
