#include "sdiov/vnf_controller.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sdiov/errors.hpp"

namespace sdiov {

double PmView::load() const {
  double total = 0.0;
  for (const auto& v : vnfs) total += v.load;
  return total;
}

const char* to_string(ActionKind k) {
  switch (k) {
    case ActionKind::PowerOn: return "power_on";
    case ActionKind::PowerOff: return "power_off";
    case ActionKind::Migrate: return "migrate";
  }
  return "?";
}

const char* to_string(Branch b) {
  switch (b) {
    case Branch::None: return "none";
    case Branch::Deadband: return "deadband";
    case Branch::Waiting: return "waiting";
    case Branch::Reduction: return "temperature_reduction";
    case Branch::Increase: return "temperature_increase";
  }
  return "?";
}

bool operator==(const PlanAction& a, const PlanAction& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == ActionKind::Migrate) return a.vnf == b.vnf && a.src == b.src && a.dst == b.dst;
  return a.pm == b.pm;
}

double VnfControllerParams::effective_ceiling() const {
  if (consolidation_ceiling) return *consolidation_ceiling;
  const double hot = std::min(1.0, target_temperature + deadband);
  return std::clamp(alpha + hot * (beta - alpha), 0.0, 1.0);
}

VnfControllerState::VnfControllerState(const VnfControllerParams& p) : params(p) {
  if (!(p.alpha >= 0.0 && p.alpha < p.beta && p.beta <= 1.0)) {
    throw ValidationError("alpha/beta", "need 0 <= alpha < beta <= 1");
  }
  pid.gains = p.gains;
  pid.setpoint = p.target_temperature;
  pid.dt = p.dt;
  pid.integral_limit = p.integral_limit;
  pid.action = PidAction::Direct;
  validate(pid);
}

double pm_temperature(double x_hat, double alpha, double beta) {
  if (x_hat <= alpha) return 0.0;
  if (x_hat >= beta) return 1.0;
  return (x_hat - alpha) / (beta - alpha);
}

double system_temperature(std::span<const double> temps) {
  if (temps.empty()) throw NoActivePm();
  return std::accumulate(temps.begin(), temps.end(), 0.0) / static_cast<double>(temps.size());
}

namespace {

// Largest load first, then lowest id.
std::vector<VnfLoad> by_load_desc(std::vector<VnfLoad> vnfs) {
  std::stable_sort(vnfs.begin(), vnfs.end(), [](const VnfLoad& a, const VnfLoad& b) {
    if (a.load != b.load) return a.load > b.load;
    return a.vnf < b.vnf;
  });
  return vnfs;
}

}  // namespace

Plan temperature_increase_plan(const WorldView& world, double ceiling_fraction) {
  std::vector<const PmView*> active;
  for (const auto& pm : world.pms) {
    if (pm.active()) active.push_back(&pm);
  }
  if (active.size() < 2) throw NothingToDo();

  // Coolest first; among equals the highest id goes first so low-numbered
  // servers are the ones kept running.
  std::vector<const PmView*> order = active;
  std::stable_sort(order.begin(), order.end(), [](const PmView* a, const PmView* b) {
    if (a->predicted_utilization != b->predicted_utilization) {
      return a->predicted_utilization < b->predicted_utilization;
    }
    return a->pm > b->pm;
  });
  const std::size_t n_sources = active.size() / 2;
  std::vector<const PmView*> sources(order.begin(), order.begin() + n_sources);
  std::vector<const PmView*> survivors(order.begin() + n_sources, order.end());
  std::sort(survivors.begin(), survivors.end(),
            [](const PmView* a, const PmView* b) { return a->pm > b->pm; });

  std::vector<double> projected;
  for (const auto* s : survivors) projected.push_back(s->load());

  Plan plan;
  for (const auto* src : sources) {
    std::vector<double> trial = projected;
    Plan moves;
    bool fits = true;
    for (const auto& v : by_load_desc(src->vnfs)) {
      bool placed = false;
      for (std::size_t j = 0; j < survivors.size(); ++j) {
        const double limit = ceiling_fraction * survivors[j]->cpu_capacity;
        if (trial[j] + v.load <= limit) {
          trial[j] += v.load;
          moves.push_back(PlanAction::migrate(v.vnf, src->pm, survivors[j]->pm));
          placed = true;
          break;
        }
      }
      if (!placed) {
        fits = false;
        break;
      }
    }
    if (!fits) continue;
    projected = trial;
    plan.insert(plan.end(), moves.begin(), moves.end());
    plan.push_back(PlanAction::power_off(src->pm));
  }
  return plan;
}

ReductionPlan temperature_reduction_plan(const WorldView& world) {
  std::vector<const PmView*> active;
  std::vector<const PmView*> standby;
  for (const auto& pm : world.pms) {
    if (pm.active()) active.push_back(&pm);
    if (!pm.on) standby.push_back(&pm);
  }
  if (active.empty()) throw NoActivePm();
  if (standby.empty()) throw NoStandbyPm();
  std::sort(standby.begin(), standby.end(),
            [](const PmView* a, const PmView* b) { return a->pm < b->pm; });
  std::stable_sort(active.begin(), active.end(), [](const PmView* a, const PmView* b) {
    if (a->load() != b->load()) return a->load() > b->load();
    return a->pm < b->pm;
  });

  const std::size_t wanted = (active.size() + 1) / 2;
  const std::size_t k = std::min(wanted, standby.size());
  ReductionPlan out;
  out.truncated = k < wanted;
  for (std::size_t i = 0; i < k; ++i) {
    const PmId fresh = standby[i]->pm;
    out.plan.push_back(PlanAction::power_on(fresh));
    const auto vnfs = by_load_desc(active[i]->vnfs);
    const std::size_t half = vnfs.size() / 2;
    // Largest first; one that would overfill the new server is skipped.
    double room = standby[i]->cpu_capacity;
    std::size_t moved = 0;
    for (std::size_t m = 0; m < vnfs.size() && moved < half; ++m) {
      if (vnfs[m].load > room) continue;
      room -= vnfs[m].load;
      ++moved;
      out.plan.push_back(PlanAction::migrate(vnfs[m].vnf, active[i]->pm, fresh));
    }
  }
  return out;
}

VnfTickResult vnf_tick(VnfControllerState& state, WorldView& world) {
  const auto& p = state.params;
  auto& predictors = state.per_pm_predictors;
  for (auto it = predictors.begin(); it != predictors.end();) {
    const bool on = std::any_of(world.pms.begin(), world.pms.end(),
                                [&](const PmView& v) { return v.pm == it->first && v.on; });
    it = on ? std::next(it) : predictors.erase(it);
  }

  std::vector<double> temps;
  for (auto& pm : world.pms) {
    if (!pm.on) continue;
    auto [it, inserted] = predictors.try_emplace(pm.pm, p.window, p.step_size);
    it->second = observe(std::move(it->second), pm.utilization);
    pm.predicted_utilization = predict(it->second);
    if (pm.active()) temps.push_back(pm_temperature(pm.predicted_utilization, p.alpha, p.beta));
  }

  VnfTickResult out;
  out.system_temperature = system_temperature(temps);
  state.last_system_temperature = out.system_temperature;
  auto [pid, w] = pid_step(
      state.pid, out.system_temperature,
      threshold_saturated(state.pid, state.temperature_threshold, out.system_temperature));
  state.pid = pid;
  state.last_w = w;
  state.temperature_threshold = apply_threshold_filter(state.temperature_threshold, w);
  out.w = w;
  out.temperature_threshold = state.temperature_threshold;

  if (world.migrations_in_flight || state.ticks++ < p.startup_hold) {
    out.branch = Branch::Waiting;
    return out;
  }
  if (std::abs(out.system_temperature - p.target_temperature) <= p.deadband) {
    out.branch = Branch::Deadband;
    return out;
  }
  if (w >= p.theta) {
    out.branch = Branch::Reduction;
    try {
      auto r = temperature_reduction_plan(world);
      out.plan = std::move(r.plan);
      if (r.truncated) out.warnings.emplace_back("standby pool smaller than requested expansion");
    } catch (const NoStandbyPm& e) {
      out.warnings.emplace_back(e.what());
    }
  } else {
    out.branch = Branch::Increase;
    try {
      out.plan = temperature_increase_plan(world, p.effective_ceiling());
    } catch (const NothingToDo& e) {
      out.warnings.emplace_back(e.what());
    }
  }
  return out;
}

}  // namespace sdiov
