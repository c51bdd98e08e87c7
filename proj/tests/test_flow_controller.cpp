#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "sdiov/errors.hpp"
#include "sdiov/flow_controller.hpp"

using namespace sdiov;

namespace {

struct Fixture {
  std::vector<PhysicalMachine> pms;
  std::vector<Vnf> vnfs;

  explicit Fixture(std::size_t n) {
    for (std::uint32_t i = 0; i < n; ++i) {
      PhysicalMachine pm;
      pm.id = PmId(i);
      pm.name = "M" + std::to_string(i + 1);
      pm.hosted_vnfs = {VnfId(i)};
      pms.push_back(pm);
      vnfs.push_back(Vnf{VnfId(i), 25.0, PmId(i), std::nullopt});
    }
  }
};

std::vector<FlowRequest> requests(std::size_t n, std::uint32_t first_id = 0, double cpu = 1.0) {
  std::vector<FlowRequest> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].id = RequestId(first_id + static_cast<std::uint32_t>(i));
    out[i].cpu_demand = cpu;
  }
  return out;
}

Snapshot snapshot_of(const std::vector<std::size_t>& conns, const std::vector<double>& rts = {}) {
  Snapshot s;
  for (std::size_t i = 0; i < conns.size(); ++i) {
    PmStats p;
    p.pm = PmId(static_cast<std::uint32_t>(i));
    p.connections = conns[i];
    p.response_time_ms = rts.empty() ? 10.0 : rts[i];
    s.push_back(p);
  }
  return s;
}

template <typename Key>
PmId scan_argmin(const Snapshot& s, Key key) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (key(s[i]) < key(s[best])) best = i;
  }
  return s[best].pm;
}

}  // namespace

TEST_CASE("idle world gives zero statistics") {
  Fixture f(3);
  const auto snap = collect_statistics(f.pms, f.vnfs);
  REQUIRE(snap.size() == 3);
  for (const auto& s : snap) {
    CHECK(s.utilization == 0.0);
    CHECK(s.connections == 0);
  }
}

TEST_CASE("connections are copied per server and Off servers skipped") {
  Fixture f(3);
  f.pms[0].active_connections = 5;
  f.pms[1].active_connections = 2;
  f.pms[2].power_state = PowerState::Off;
  f.pms[2].hosted_vnfs.clear();
  f.vnfs.pop_back();
  const auto snap = collect_statistics(f.pms, f.vnfs);
  REQUIRE(snap.size() == 2);
  CHECK(snap[0].connections == 5);
  CHECK(snap[1].connections == 2);
}

TEST_CASE("response time smoothing") {
  double rt = 10.0;
  rt = smooth_response_time(rt, 10.0, 0.3);
  rt = smooth_response_time(rt, 20.0, 0.3);
  CHECK(rt == doctest::Approx(13.0));
}

TEST_CASE("system load estimate is the mean of per-server predictions") {
  FlowControllerState st;
  Snapshot snap = snapshot_of({0, 0});
  snap[0].utilization = 0.4;
  snap[1].utilization = 0.6;
  double est = 0;
  for (int i = 0; i < 20; ++i) est = estimate_system_load(st, snap);
  CHECK(est == doctest::Approx(0.5));

  FlowControllerState one;
  Snapshot s1 = snapshot_of({0});
  s1[0].utilization = 0.3;
  for (int i = 0; i < 20; ++i) est = estimate_system_load(one, s1);
  CHECK(est == doctest::Approx(0.3));
}

TEST_CASE("system load estimate matches three separate predictors") {
  FlowControllerState st;
  std::vector<NlmsState> oracle(3, NlmsState(8, 0.5));
  Rng rng(11);
  std::vector<double> x = {0.2, 0.5, 0.7};
  for (int k = 0; k < 300; ++k) {
    Snapshot snap = snapshot_of({0, 0, 0});
    double expect = 0;
    for (int i = 0; i < 3; ++i) {
      x[i] = std::clamp(x[i] + 0.05 * rng.normal(), 0.0, 1.0);
      snap[i].utilization = x[i];
      oracle[i] = observe(oracle[i], x[i]);
      expect += predict(oracle[i]);
    }
    CHECK(estimate_system_load(st, snap) == doctest::Approx(expect / 3.0).epsilon(1e-12));
  }
}

TEST_CASE("predictors follow the On set") {
  FlowControllerState st;
  estimate_system_load(st, snapshot_of({0, 0, 0}));
  CHECK(st.per_pm_predictors.size() == 3);
  Snapshot two = snapshot_of({0, 0, 0});
  two.erase(two.begin() + 1);
  estimate_system_load(st, two);
  CHECK(st.per_pm_predictors.size() == 2);
  CHECK(st.per_pm_predictors.count(PmId(1)) == 0);
  CHECK_THROWS_AS(estimate_system_load(st, Snapshot{}), NoActivePm);
}

TEST_CASE("select_pm follows the sign of u") {
  CHECK(select_pm(snapshot_of({7, 2, 5}), 0.3, 0.0) == PmId(1));
  CHECK(select_pm(snapshot_of({0, 0, 0}, {12, 8, 8}), -0.1, 0.0) == PmId(1));
  CHECK(policy_for(0.0, 0.0) == Policy::LeastConnection);
  CHECK(policy_for(-1e-9, 0.0) == Policy::LeastResponseTime);
}

TEST_CASE("least connection over all permutations of four counts") {
  std::vector<std::size_t> c = {1, 4, 6, 9};
  do {
    const auto snap = snapshot_of(c);
    CHECK(least_connection(snap) == scan_argmin(snap, [](const PmStats& s) { return s.connections; }));
  } while (std::next_permutation(c.begin(), c.end()));
}

TEST_CASE("least connection basics") {
  CHECK(least_connection(snapshot_of({3, 1, 2})) == PmId(1));
  CHECK(least_connection(snapshot_of({2, 1, 1})) == PmId(1));
  CHECK_THROWS_AS(least_connection(Snapshot{}), NoActivePm);
}

TEST_CASE("first placement with all-zero counts is seeded") {
  const auto snap = snapshot_of({0, 0, 0});
  Rng a(42), b(42);
  CHECK(least_connection(snap, a, true) == least_connection(snap, b, true));
  std::vector<int> hits(3, 0);
  Rng r(1);
  for (int i = 0; i < 300; ++i) ++hits[least_connection(snap, r, true).index()];
  for (int h : hits) CHECK(h > 50);
}

TEST_CASE("least response time basics") {
  CHECK(least_response_time(snapshot_of({0, 0, 0}, {12, 8, 20})) == PmId(1));
  CHECK(least_response_time(snapshot_of({0}, {30})) == PmId(0));
}

TEST_CASE("argmin policies match a linear scan on random snapshots") {
  Rng rng(5);
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = 1 + rng.index(5);
    std::vector<std::size_t> c(n);
    std::vector<double> rt(n);
    for (std::size_t i = 0; i < n; ++i) {
      c[i] = rng.index(4);  // small range forces ties
      rt[i] = 5.0 + static_cast<double>(rng.index(4));
    }
    const auto snap = snapshot_of(c, rt);
    CHECK(least_connection(snap) == scan_argmin(snap, [](const PmStats& s) { return s.connections; }));
    CHECK(least_response_time(snap) ==
          scan_argmin(snap, [](const PmStats& s) { return s.response_time_ms; }));
  }
}

TEST_CASE("scaling connection counts keeps the least-connection choice") {
  Rng rng(9);
  for (int k = 0; k < 200; ++k) {
    std::vector<std::size_t> c(4), scaled(4);
    const std::size_t factor = 1 + rng.index(7);
    for (int i = 0; i < 4; ++i) {
      c[i] = rng.index(10);
      scaled[i] = c[i] * factor;
    }
    CHECK(least_connection(snapshot_of(c)) == least_connection(snapshot_of(scaled)));
  }
}

TEST_CASE("non-accepting servers are never chosen") {
  auto snap = snapshot_of({0, 5, 5});
  snap[0].accepting = false;
  CHECK(least_connection(snap) == PmId(1));
  snap[1].accepting = snap[2].accepting = false;
  CHECK_THROWS_AS(least_connection(snap), NoActivePm);
}

TEST_CASE("no pending requests still advances the pid") {
  Fixture f(2);
  FlowControllerState st;
  Rng rng(1);
  const auto r = flow_tick(st, f.pms, f.vnfs, {}, rng);
  CHECK(r.decisions.empty());
  CHECK(st.pid.primed);
  CHECK(st.pid.integral != 0.0);
}

TEST_CASE("a burst alternates between two equal servers") {
  Fixture f(2);
  FlowControllerState st;
  Rng rng(1);
  const auto pending = requests(10);
  const auto r = flow_tick(st, f.pms, f.vnfs, pending, rng);
  REQUIRE(r.u >= 0.0);
  REQUIRE(r.decisions.size() == 10);
  // Step through least connection by hand, starting from the seeded first pick.
  std::vector<std::size_t> count(2, 0);
  for (std::size_t i = 0; i < 10; ++i) {
    REQUIRE(r.decisions[i].pm.has_value());
    const std::size_t expect = i == 0 ? r.decisions[0].pm->index() : (count[1] < count[0] ? 1 : 0);
    CHECK(r.decisions[i].pm->index() == expect);
    ++count[expect];
    CHECK(r.decisions[i].policy == Policy::LeastConnection);
  }
  CHECK(count[0] == 5);
  CHECK(count[1] == 5);
}

TEST_CASE("every pending request gets exactly one decision") {
  Fixture f(3);
  FlowControllerState st;
  Rng rng(2);
  const auto pending = requests(37);
  const auto r = flow_tick(st, f.pms, f.vnfs, pending, rng);
  REQUIRE(r.decisions.size() == pending.size());
  for (std::size_t i = 0; i < pending.size(); ++i) CHECK(r.decisions[i].request == pending[i].id);
}

TEST_CASE("no server On propagates NoActivePm") {
  Fixture f(2);
  for (auto& pm : f.pms) {
    pm.power_state = PowerState::Off;
    pm.hosted_vnfs.clear();
  }
  FlowControllerState st;
  Rng rng(1);
  const auto pending = requests(10);
  CHECK_THROWS_AS(flow_tick(st, f.pms, f.vnfs, pending, rng), NoActivePm);
}

TEST_CASE("connection counts stay within two over a long uniform stream") {
  Fixture f(3);
  FlowControllerState st;
  Rng rng(4);
  const double cpu = 0.05;
  std::uint32_t next = 0;
  for (int tick = 0; tick < 100; ++tick) {
    const auto pending = requests(100, next, cpu);
    next += 100;
    const auto r = flow_tick(st, f.pms, f.vnfs, pending, rng);
    for (const auto& d : r.decisions) {
      REQUIRE(d.pm.has_value());
      ++f.pms[d.pm->index()].active_connections;
    }
    for (auto& pm : f.pms) {
      pm.cpu_utilization = std::min(1.0, static_cast<double>(pm.active_connections) * cpu / pm.cpu_capacity);
      pm.response_time_ms = 10.0 + queueing_delay_ms(pm.cpu_utilization, QosParams{});
    }
    std::size_t lo = SIZE_MAX, hi = 0;
    for (const auto& pm : f.pms) {
      lo = std::min(lo, pm.active_connections);
      hi = std::max(hi, pm.active_connections);
    }
    CHECK(hi - lo <= 2);
  }
}

TEST_CASE("account_assignment moves the snapshot") {
  PmStats s;
  s.cpu_capacity = 100;
  s.response_time_ms = 10;
  account_assignment(s, 50, QosParams{});
  CHECK(s.connections == 1);
  CHECK(s.utilization == doctest::Approx(0.5));
  CHECK(s.response_time_ms == doctest::Approx(10 + 5 * 0.5 / 0.51));
}
