#include "sdiov/flow_controller.hpp"

#include <algorithm>

#include "sdiov/errors.hpp"

namespace sdiov {

const char* to_string(Policy p) {
  switch (p) {
    case Policy::LeastConnection: return "least_connection";
    case Policy::LeastResponseTime: return "least_response_time";
    case Policy::StaticHash: return "static_hash";
  }
  return "?";
}

FlowControllerState::FlowControllerState(const FlowControllerParams& p) : params(p) {
  pid.gains = p.gains;
  pid.setpoint = p.target_load;
  pid.dt = p.dt;
  pid.integral_limit = p.integral_limit;
  pid.action = PidAction::Reverse;
  validate(pid);
}

Snapshot collect_statistics(std::span<const PhysicalMachine> pms, std::span<const Vnf> vnfs) {
  Snapshot snap;
  for (const auto& pm : pms) {
    if (!pm.is_on()) continue;
    const bool can_serve = std::any_of(vnfs.begin(), vnfs.end(), [&](const Vnf& v) {
      return v.host == pm.id && !v.migration.has_value();
    });
    snap.push_back(PmStats{pm.id, pm.cpu_utilization, pm.active_connections, pm.response_time_ms,
                           pm.cpu_capacity, !pm.draining && can_serve});
  }
  std::sort(snap.begin(), snap.end(), [](const PmStats& a, const PmStats& b) { return a.pm < b.pm; });
  return snap;
}

double estimate_system_load(FlowControllerState& state, const Snapshot& snapshot) {
  if (snapshot.empty()) throw NoActivePm();
  auto& predictors = state.per_pm_predictors;
  for (auto it = predictors.begin(); it != predictors.end();) {
    const bool present = std::any_of(snapshot.begin(), snapshot.end(),
                                     [&](const PmStats& s) { return s.pm == it->first; });
    it = present ? std::next(it) : predictors.erase(it);
  }
  double sum = 0.0;
  for (const auto& s : snapshot) {
    auto [it, inserted] =
        predictors.try_emplace(s.pm, state.params.window, state.params.step_size);
    it->second = observe(std::move(it->second), s.utilization);
    sum += predict(it->second);
  }
  state.last_system_load_estimate = sum / static_cast<double>(snapshot.size());
  return state.last_system_load_estimate;
}

namespace {

template <typename Key>
PmId argmin_accepting(const Snapshot& snapshot, Key key) {
  const PmStats* best = nullptr;
  for (const auto& s : snapshot) {
    if (!s.accepting) continue;
    // Strict comparison keeps the lowest id on ties (snapshot is id-sorted).
    if (best == nullptr || key(s) < key(*best)) best = &s;
  }
  if (best == nullptr) throw NoActivePm();
  return best->pm;
}

}  // namespace

PmId least_connection(const Snapshot& snapshot) {
  return argmin_accepting(snapshot, [](const PmStats& s) { return s.connections; });
}

PmId least_connection(const Snapshot& snapshot, Rng& rng, bool initial) {
  if (initial) {
    std::vector<PmId> candidates;
    bool all_zero = true;
    for (const auto& s : snapshot) {
      if (!s.accepting) continue;
      candidates.push_back(s.pm);
      all_zero = all_zero && s.connections == 0;
    }
    if (candidates.empty()) throw NoActivePm();
    if (all_zero) return candidates[rng.index(candidates.size())];
  }
  return least_connection(snapshot);
}

PmId least_response_time(const Snapshot& snapshot) {
  return argmin_accepting(snapshot, [](const PmStats& s) { return s.response_time_ms; });
}

Policy policy_for(double u, double delta) {
  return u >= delta ? Policy::LeastConnection : Policy::LeastResponseTime;
}

PmId select_pm(const Snapshot& snapshot, double u, double delta) {
  return policy_for(u, delta) == Policy::LeastConnection ? least_connection(snapshot)
                                                         : least_response_time(snapshot);
}

void account_assignment(PmStats& stats, double cpu_demand, const QosParams& qos) {
  const double before = std::min(stats.utilization, 1.0);
  stats.utilization += cpu_demand / stats.cpu_capacity;
  const double after = std::min(stats.utilization, 1.0);
  stats.response_time_ms += queueing_delay_ms(after, qos) - queueing_delay_ms(before, qos);
  ++stats.connections;
}

FlowTickResult flow_tick(FlowControllerState& state, std::span<const PhysicalMachine> pms,
                         std::span<const Vnf> vnfs, std::span<const FlowRequest> pending, Rng& rng) {
  Snapshot snap = collect_statistics(pms, vnfs);
  FlowTickResult out;
  out.system_load_estimate = estimate_system_load(state, snap);

  auto [pid, u] = pid_step(state.pid, out.system_load_estimate,
                            threshold_saturated(state.pid, state.load_threshold, out.system_load_estimate));
  state.pid = pid;
  state.last_u = u;
  state.load_threshold = apply_threshold_filter(state.load_threshold, u);
  out.u = u;
  out.load_threshold = state.load_threshold;

  const Policy policy = policy_for(u, state.params.delta);
  for (const auto& req : pending) {
    Decision d{req.id, std::nullopt, policy, u};
    try {
      const PmId chosen = policy == Policy::LeastConnection
                              ? least_connection(snap, rng, !state.first_decision_made)
                              : least_response_time(snap);
      state.first_decision_made = true;
      d.pm = chosen;
      auto it = std::find_if(snap.begin(), snap.end(),
                             [&](const PmStats& s) { return s.pm == chosen; });
      account_assignment(*it, req.cpu_demand, state.params.qos);
    } catch (const NoActivePm&) {
      // Rejected; the engine counts it.
    }
    out.decisions.push_back(d);
  }
  return out;
}

}  // namespace sdiov
