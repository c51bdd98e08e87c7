#include "sdiov/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "sdiov/errors.hpp"

namespace sdiov {

double r_factor(double delay_ms, double loss_fraction) {
  const double id = 0.024 * delay_ms + 0.11 * std::max(0.0, delay_ms - 177.3);
  const double ie = 30.0 * std::log1p(15.0 * loss_fraction);
  return std::clamp(93.2 - id - ie, 0.0, 100.0);
}

double mos(double r) {
  if (r <= 0.0) return 1.0;
  if (r >= 100.0) return 4.5;
  // The cubic dips just under 1 for R below about 6.5; floor it there.
  return std::max(1.0, 1.0 + 0.035 * r + 7e-6 * r * (r - 60.0) * (100.0 - r));
}

double balance_spread(std::span<const double> utilizations) {
  if (utilizations.empty()) throw NoActivePm();
  const auto [lo, hi] = std::minmax_element(utilizations.begin(), utilizations.end());
  return (*hi - *lo) * 100.0;
}

ScenarioSummary summarize(std::span<const MetricsRecord> records) {
  if (records.empty()) throw EmptyRun();
  ScenarioSummary s;
  s.ticks = records.size();
  const double n = static_cast<double>(records.size());
  const std::size_t n_pm = records.front().per_pm.size();
  const std::size_t n_sw = records.front().per_switch_utilization.size();

  std::vector<double> pm_sum(n_pm, 0.0), pm_on(n_pm, 0.0), sw_sum(n_sw, 0.0);
  double on_util_sum = 0.0, on_periods = 0.0;
  for (const auto& r : records) {
    for (std::size_t i = 0; i < n_pm && i < r.per_pm.size(); ++i) {
      if (!r.per_pm[i].on) continue;
      pm_sum[i] += r.per_pm[i].utilization;
      pm_on[i] += 1.0;
      on_util_sum += r.per_pm[i].utilization;
      on_periods += 1.0;
    }
    for (std::size_t i = 0; i < n_sw && i < r.per_switch_utilization.size(); ++i) {
      sw_sum[i] += r.per_switch_utilization[i];
    }
    s.mean_pm_spread_pp += r.pm_spread_pp;
    s.mean_switch_spread_pp += r.switch_spread_pp;
    s.total_energy_kwh += r.energy_j;
    s.mean_power_w += r.total_power_w;
    s.mean_on_pms += static_cast<double>(r.on_pm_count);
    s.mean_delay_ms += r.mean_delay_ms;
    s.mean_jitter_ms += r.mean_jitter_ms;
    s.mean_setup_ms += r.mean_setup_ms;
    s.mean_r_factor += r.r_factor;
    s.mean_mos += r.mos;
    s.mean_system_temperature += r.system_temperature;
  }
  s.pm_mean_utilization.resize(n_pm);
  for (std::size_t i = 0; i < n_pm; ++i) {
    s.pm_mean_utilization[i] = pm_on[i] > 0.0 ? pm_sum[i] / pm_on[i] : 0.0;
  }
  s.switch_mean_utilization.resize(n_sw);
  for (std::size_t i = 0; i < n_sw; ++i) s.switch_mean_utilization[i] = sw_sum[i] / n;
  s.mean_pm_utilization = on_periods > 0.0 ? on_util_sum / on_periods : 0.0;

  s.total_energy_kwh /= 3.6e6;
  for (double* v : {&s.mean_power_w, &s.mean_pm_spread_pp, &s.mean_switch_spread_pp, &s.mean_on_pms,
                    &s.mean_delay_ms, &s.mean_jitter_ms, &s.mean_setup_ms, &s.mean_r_factor,
                    &s.mean_mos, &s.mean_system_temperature}) {
    *v /= n;
  }

  const auto& last = records.back();
  s.offered = last.offered;
  s.served = last.served;
  s.rejected = last.rejected;
  s.lost = last.lost;
  s.in_flight = last.in_flight;
  const double resolved = static_cast<double>(last.served + last.rejected + last.lost);
  s.goodput = resolved > 0.0 ? static_cast<double>(last.served) / resolved : 1.0;
  s.loss_rate = resolved > 0.0 ? static_cast<double>(last.lost) / resolved : 0.0;
  return s;
}

}  // namespace sdiov
