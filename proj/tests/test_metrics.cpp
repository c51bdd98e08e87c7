#include <cmath>

#include "doctest.h"
#include "sdiov/errors.hpp"
#include "sdiov/metrics.hpp"

using namespace sdiov;

TEST_CASE("r-factor") {
  CHECK(r_factor(0, 0) == doctest::Approx(93.2));
  CHECK(r_factor(100, 0) == doctest::Approx(90.8));
  // total loss leaves about 10.02 at zero delay; any delay pushes it under 10
  CHECK(r_factor(0, 1.0) < 10.03);
  CHECK(r_factor(1, 1.0) <= 10.0);
  CHECK(r_factor(0, 1.0) == doctest::Approx(93.2 - 30.0 * std::log(16.0)));
  CHECK(r_factor(5000, 1.0) == 0.0);
  // Both impairments kick in past 177.3 ms.
  CHECK(r_factor(200, 0) == doctest::Approx(93.2 - 0.024 * 200 - 0.11 * 22.7));
}

TEST_CASE("mos mapping") {
  CHECK(mos(0) == 1.0);
  CHECK(mos(-5) == 1.0);
  CHECK(mos(100) == 4.5);
  const double r = 93.2;
  CHECK(mos(r) == doctest::Approx(1 + 0.035 * r + 7e-6 * r * (r - 60) * (100 - r)));
  CHECK(mos(r) == doctest::Approx(4.41).epsilon(0.002));
}

TEST_CASE("r-factor never increases with delay or loss") {
  for (int d = 0; d < 600; d += 7) {
    for (int l = 0; l < 100; l += 3) {
      const double r = r_factor(d, l / 100.0);
      CHECK(r_factor(d + 7, l / 100.0) <= r);
      CHECK(r_factor(d, (l + 3) / 100.0) <= r);
    }
  }
}

TEST_CASE("mos never decreases with r on [0, 100]") {
  double prev = mos(0);
  for (int i = 1; i <= 1000; ++i) {
    const double m = mos(i / 10.0);
    CHECK(m >= prev);
    prev = m;
  }
}

TEST_CASE("balance spread") {
  const std::vector<double> trad = {0.708, 0.198, 0.257, 0.417, 0.515, 0.603, 0.352, 0.507};
  const std::vector<double> prop = {0.405, 0.408, 0.400, 0.417, 0.426, 0.410, 0.406, 0.408};
  CHECK(balance_spread(trad) == doctest::Approx(51.0));
  CHECK(balance_spread(prop) == doctest::Approx(2.6));
  CHECK(balance_spread(std::vector<double>{0.3, 0.3, 0.3}) == 0.0);
  CHECK_THROWS_AS(balance_spread(std::vector<double>{}), NoActivePm);
}

TEST_CASE("spread ignores a common offset") {
  const std::vector<double> u = {0.1, 0.25, 0.4};
  for (double c : {0.0, 0.1, 0.3, 0.55}) {
    std::vector<double> v = u;
    for (auto& x : v) x += c;
    CHECK(balance_spread(v) == doctest::Approx(balance_spread(u)));
  }
}

namespace {

MetricsRecord record(double u0, double u1, double delay, double mos_v, double power, std::uint64_t served) {
  MetricsRecord r;
  r.per_pm = {{true, u0, 100 + 150 * u0, 3, 6}, {true, u1, 100 + 150 * u1, 2, 6}};
  r.per_switch_utilization = {0.1, 0.3};
  r.offered = served + 2;
  r.served = served;
  r.rejected = 1;
  r.lost = 1;
  r.mean_delay_ms = delay;
  r.mean_jitter_ms = delay / 10;
  r.mean_setup_ms = delay + 1000;
  r.r_factor = 90;
  r.mos = mos_v;
  r.system_temperature = 0.5;
  r.on_pm_count = 2;
  r.pm_spread_pp = std::abs(u0 - u1) * 100;
  r.switch_spread_pp = 20;
  r.total_power_w = power;
  r.energy_j = power;
  return r;
}

}  // namespace

TEST_CASE("summary of one record equals the record") {
  const auto r = record(0.2, 0.4, 12, 4.3, 400, 10);
  const auto s = summarize(std::vector<MetricsRecord>{r});
  CHECK(s.ticks == 1);
  CHECK(s.pm_mean_utilization == std::vector<double>{0.2, 0.4});
  CHECK(s.switch_mean_utilization == std::vector<double>{0.1, 0.3});
  CHECK(s.mean_delay_ms == 12);
  CHECK(s.mean_mos == 4.3);
  CHECK(s.mean_power_w == 400);
  CHECK(s.total_energy_kwh == doctest::Approx(400 / 3.6e6));
  CHECK(s.mean_pm_spread_pp == doctest::Approx(20));
  CHECK(s.served == 10);
  CHECK(s.goodput == doctest::Approx(10.0 / 12.0));
}

TEST_CASE("summary of two records uses plain means and totals") {
  const auto a = record(0.2, 0.4, 10, 4.0, 300, 5);
  const auto b = record(0.6, 0.8, 30, 4.4, 500, 9);
  const auto s = summarize(std::vector<MetricsRecord>{a, b});
  CHECK(s.mean_delay_ms == doctest::Approx((10.0 + 30.0) / 2));
  CHECK(s.mean_mos == doctest::Approx((4.0 + 4.4) / 2));
  CHECK(s.mean_power_w == doctest::Approx(400));
  CHECK(s.total_energy_kwh == doctest::Approx((300.0 + 500.0) / 3.6e6));
  CHECK(s.pm_mean_utilization[0] == doctest::Approx(0.4));
  CHECK(s.pm_mean_utilization[1] == doctest::Approx(0.6));
  CHECK(s.mean_pm_utilization == doctest::Approx((0.2 + 0.4 + 0.6 + 0.8) / 4));
  // counters are cumulative, so the last record holds the totals
  CHECK(s.served == 9);
  CHECK(s.loss_rate == doctest::Approx(1.0 / 11.0));
}

TEST_CASE("off periods do not drag a server's mean down") {
  auto a = record(0.5, 0.4, 10, 4, 300, 1);
  auto b = record(0.0, 0.6, 10, 4, 300, 1);
  b.per_pm[0].on = false;
  const auto s = summarize(std::vector<MetricsRecord>{a, b});
  CHECK(s.pm_mean_utilization[0] == doctest::Approx(0.5));
}

TEST_CASE("empty run") {
  CHECK_THROWS_AS(summarize(std::vector<MetricsRecord>{}), EmptyRun);
}
