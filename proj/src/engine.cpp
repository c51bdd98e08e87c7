#include "sdiov/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sdiov/errors.hpp"

namespace sdiov {

namespace {

constexpr std::size_t kNoSwitch = std::numeric_limits<std::size_t>::max();
constexpr double kTimeEps = 1e-9;

// Share of the period [t0, t1) during which the session exists.
double active_fraction(const FlowRequest& f, double t0, double t1) {
  const double lo = std::max(f.arrival_time, t0);
  const double hi = std::min(f.end_time(), t1);
  return hi > lo ? (hi - lo) / (t1 - t0) : 0.0;
}

// Newest sessions are shed first.
bool newer(const FlowRequest* a, const FlowRequest* b) {
  if (a->arrival_time != b->arrival_time) return a->arrival_time > b->arrival_time;
  return a->id > b->id;
}

}  // namespace

double power_draw(const PhysicalMachine& pm, const PowerParams& power) {
  if (!pm.is_on()) return 0.0;
  return power.idle_w + (power.peak_w - power.idle_w) * pm.cpu_utilization;
}

PmId baseline_assign(std::uint32_t vehicle_id, std::size_t server_count) {
  return PmId{static_cast<std::uint32_t>(vehicle_id % server_count)};
}

FlowQos flow_qos(const FlowRequest& flow, const World& world, const ScenarioConfig& config) {
  FlowQos q;
  if (!flow.assigned_pm) {
    q.lost = true;
    return q;
  }
  const auto& pm = world.pms.at(flow.assigned_pm->index());
  const double bound = config.servers.backlog_bound_s * pm.cpu_capacity;
  q.delay_ms = path_latency_ms(world.topology, flow.path) +
               queueing_delay_ms(pm.cpu_utilization, config.qos) +
               1000.0 * pm.backlog / pm.cpu_capacity;
  q.jitter_ms = flow.last_delay_ms ? std::abs(q.delay_ms - *flow.last_delay_ms) : 0.0;
  q.setup_ms = q.delay_ms + 1000.0 * config.controller.dt;
  q.lost = pm.backlog > bound;
  for (const auto lid : flow.path) {
    if (lid.index() < world.link_load_mbps.size() &&
        world.link_load_mbps[lid.index()] > world.topology.link(lid).capacity_mbps) {
      q.lost = true;
    }
  }
  return q;
}

namespace {

FlowControllerParams flow_params(const ScenarioConfig& c) {
  FlowControllerParams p;
  p.target_load = c.controller.target_load;
  p.gains = c.controller.load_gains;
  p.dt = c.controller.dt;
  p.integral_limit = c.controller.integral_limit;
  p.delta = c.controller.delta;
  p.window = c.controller.window;
  p.step_size = c.controller.zeta;
  p.qos = c.qos;
  return p;
}

VnfControllerParams vnf_params(const ScenarioConfig& c) {
  VnfControllerParams p;
  p.target_temperature = c.controller.target_temperature;
  p.gains = c.controller.temperature_gains;
  p.dt = c.controller.dt;
  p.integral_limit = c.controller.integral_limit;
  p.alpha = c.controller.alpha;
  p.beta = c.controller.beta;
  p.theta = c.controller.theta;
  p.deadband = c.controller.deadband;
  p.window = c.controller.window;
  p.step_size = c.controller.xi;
  p.consolidation_ceiling = c.controller.consolidation_ceiling;
  p.startup_hold = c.controller.startup_hold;
  return p;
}

}  // namespace

Simulation::Simulation(ScenarioConfig config, bool keep_logs)
    : config_(std::move(config)),
      keep_logs_(keep_logs),
      flow_state_(flow_params(config_)),
      vnf_state_(vnf_params(config_)) {
  validate(config_);
  world_.mode = config_.mode;
  world_.topology = config_.topology;
  const auto& topo = world_.topology;
  const auto& sp = config_.servers;

  for (std::size_t i = 0; i < topo.servers().size(); ++i) {
    PhysicalMachine pm;
    pm.id = PmId{static_cast<std::uint32_t>(i)};
    pm.name = topo.node(topo.servers()[i]).name;
    pm.cpu_capacity = sp.cpu_capacity;
    pm.response_time_ms = sp.response_time_initial_ms;
    world_.pms.push_back(pm);
  }
  for (auto& pm : world_.pms) {
    for (std::size_t k = 0; k < sp.vnfs_per_server; ++k) {
      Vnf v;
      v.id = VnfId{static_cast<std::uint32_t>(world_.vnfs.size())};
      v.cpu_demand = sp.vnf_cpu_demand;
      v.host = pm.id;
      pm.hosted_vnfs.push_back(v.id);
      world_.vnfs.push_back(v);
    }
  }
  flows_on_vnf_.assign(world_.vnfs.size(), 0);

  const auto& tp = config_.traffic;
  Rng vehicle_rng(Rng::derive(config_.seed, 1));
  world_.traffic_rng = Rng(Rng::derive(config_.seed, 2));
  world_.control_rng = Rng(Rng::derive(config_.seed, 3));
  const double mean_gap = tp.request_rate_per_vehicle > 0.0 ? 1.0 / tp.request_rate_per_vehicle
                                                            : std::numeric_limits<double>::infinity();
  world_.vehicles.reserve(tp.vehicle_count);
  for (std::uint32_t v = 0; v < tp.vehicle_count; ++v) {
    Vehicle veh;
    veh.id = v;
    veh.intensity = vehicle_rng.lognormal_unit_mean(tp.intensity_sigma);
    veh.next_arrival = std::isinf(mean_gap) || veh.intensity <= 0.0
                           ? std::numeric_limits<double>::infinity()
                           : world_.traffic_rng.exponential(mean_gap / veh.intensity);
    world_.vehicles.push_back(veh);
  }

  switch_index_.assign(topo.node_count(), kNoSwitch);
  for (std::size_t i = 0; i < topo.switches().size(); ++i) switch_index_[topo.switches()[i].index()] = i;
  world_.link_load_mbps.assign(topo.link_count(), 0.0);
  world_.switch_load_mbps.assign(topo.switches().size(), 0.0);
  world_.switch_utilization.assign(topo.switches().size(), 0.0);
}

std::size_t Simulation::total_ticks() const {
  return static_cast<std::size_t>(std::llround(config_.duration_s / config_.controller.dt));
}

bool Simulation::finished() const { return world_.tick >= total_ticks(); }

WorldView Simulation::view() const {
  WorldView v;
  std::vector<double> flow_load(world_.vnfs.size(), 0.0);
  for (const auto& f : world_.flows) {
    if (f.vnf) flow_load[f.vnf->index()] += f.cpu_demand;
  }
  for (const auto& pm : world_.pms) {
    PmView pv;
    pv.pm = pm.id;
    pv.on = pm.is_on();
    pv.draining = pm.draining;
    pv.cpu_capacity = pm.cpu_capacity;
    pv.utilization = pm.cpu_utilization;
    for (const auto vid : pm.hosted_vnfs) {
      const auto& vnf = world_.vnfs[vid.index()];
      if (vnf.migration) continue;
      pv.vnfs.push_back(VnfLoad{vid, vnf.cpu_demand + flow_load[vid.index()]});
    }
    v.pms.push_back(std::move(pv));
  }
  v.migrations_in_flight = std::any_of(world_.vnfs.begin(), world_.vnfs.end(),
                                       [](const Vnf& x) { return x.migration.has_value(); });
  return v;
}

const std::vector<Path>& Simulation::candidate_paths(std::size_t rsu, PmId pm) {
  const auto key = std::make_pair(rsu, pm.value);
  auto it = path_cache_.find(key);
  if (it == path_cache_.end()) {
    const auto& topo = world_.topology;
    it = path_cache_.emplace(key, equal_cost_paths(topo, topo.rsu_node(rsu), topo.server_node(pm))).first;
  }
  return it->second;
}

Path Simulation::route(std::size_t rsu, PmId pm, double bandwidth_mbps) {
  const auto& topo = world_.topology;
  const auto& paths = candidate_paths(rsu, pm);
  std::size_t best = 0;
  if (world_.mode == Mode::Proposed && paths.size() > 1) {
    // Load-aware choice among equal-hop paths: lowest peak switch
    // utilization, then lowest peak link utilization, then link-id order.
    double best_sw = std::numeric_limits<double>::infinity();
    double best_link = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < paths.size(); ++i) {
      double sw_peak = 0.0, link_peak = 0.0;
      for (const auto node : path_nodes(topo, topo.rsu_node(rsu), paths[i])) {
        const std::size_t s = switch_index_[node.index()];
        if (s == kNoSwitch) continue;
        const double cap = topo.node(node).forwarding_capacity_mbps;
        sw_peak = std::max(sw_peak, (world_.switch_load_mbps[s] + bandwidth_mbps) / cap);
      }
      for (const auto lid : paths[i]) {
        link_peak = std::max(link_peak, (world_.link_load_mbps[lid.index()] + bandwidth_mbps) /
                                            topo.link(lid).capacity_mbps);
      }
      if (sw_peak < best_sw || (sw_peak == best_sw && link_peak < best_link)) {
        best = i;
        best_sw = sw_peak;
        best_link = link_peak;
      }
    }
  }
  const Path& chosen = paths[best];
  for (const auto lid : chosen) world_.link_load_mbps[lid.index()] += bandwidth_mbps;
  for (const auto node : path_nodes(topo, topo.rsu_node(rsu), chosen)) {
    const std::size_t s = switch_index_[node.index()];
    if (s != kNoSwitch) world_.switch_load_mbps[s] += bandwidth_mbps;
  }
  return chosen;
}

std::optional<VnfId> Simulation::pick_vnf(PmId pm) const {
  std::optional<VnfId> best;
  for (const auto vid : world_.pms[pm.index()].hosted_vnfs) {
    const auto& v = world_.vnfs[vid.index()];
    if (v.migration) continue;
    if (!best || flows_on_vnf_[vid.index()] < flows_on_vnf_[best->index()] ||
        (flows_on_vnf_[vid.index()] == flows_on_vnf_[best->index()] && vid < *best)) {
      best = vid;
    }
  }
  return best;
}

void Simulation::generate_arrivals(std::vector<FlowRequest>& pending) {
  const double t1 = world_.clock + config_.controller.dt;
  const auto& tp = config_.traffic;
  const double mean_gap = 1.0 / tp.request_rate_per_vehicle;
  auto& rng = world_.traffic_rng;
  for (auto& veh : world_.vehicles) {
    while (veh.next_arrival < t1) {
      FlowRequest f;
      f.vehicle_id = veh.id;
      f.rsu = rng.index(world_.topology.rsus().size());
      f.arrival_time = veh.next_arrival;
      f.duration = std::max(rng.exponential(tp.mean_duration_s), 1e-6);
      f.cpu_demand = rng.uniform(tp.cpu_demand_min, tp.cpu_demand_max);
      f.bandwidth_mbps = rng.uniform(tp.bandwidth_min_mbps, tp.bandwidth_max_mbps);
      pending.push_back(f);
      veh.next_arrival += rng.exponential(mean_gap / veh.intensity);
    }
  }
  std::stable_sort(pending.begin(), pending.end(), [](const FlowRequest& a, const FlowRequest& b) {
    return a.arrival_time < b.arrival_time;
  });
  for (auto& f : pending) f.id = RequestId{world_.next_request++};
  world_.counters.offered += pending.size();
}

void Simulation::place(std::vector<FlowRequest>& pending, double& u, double& load_estimate,
                       double& load_threshold) {
  auto admit = [&](FlowRequest& f, PmId pm) {
    const auto vnf = pick_vnf(pm);
    if (!vnf) return false;
    f.assigned_pm = pm;
    f.vnf = vnf;
    f.path = route(f.rsu, pm, f.bandwidth_mbps);
    f.status = FlowStatus::Active;
    ++flows_on_vnf_[vnf->index()];
    ++world_.pms[pm.index()].active_connections;
    return true;
  };
  auto reject = [&](FlowRequest& f) {
    f.status = FlowStatus::Rejected;
    ++world_.counters.rejected;
  };

  if (world_.mode == Mode::Traditional) {
    for (auto& f : pending) {
      const PmId pm = baseline_assign(f.vehicle_id, world_.pms.size());
      const bool ok = world_.pms[pm.index()].is_on() && admit(f, pm);
      if (!ok) reject(f);
      if (keep_logs_) {
        decisions_.push_back({world_.tick, f.id, ok ? std::optional<PmId>(pm) : std::nullopt,
                              Policy::StaticHash, 0.0});
      }
      if (ok) world_.flows.push_back(f);
    }
    return;
  }

  FlowTickResult res;
  try {
    res = flow_tick(flow_state_, world_.pms, world_.vnfs, pending, world_.control_rng);
    ops_.monitoring += 1;
    ops_.estimation += flow_state_.per_pm_predictors.size();
    ops_.pid += 1;
    ops_.selection += pending.size();
  } catch (const NoActivePm&) {
    for (auto& f : pending) {
      reject(f);
      if (keep_logs_) {
        decisions_.push_back({world_.tick, f.id, std::nullopt, Policy::LeastConnection, u});
      }
    }
    return;
  }
  u = res.u;
  load_estimate = res.system_load_estimate;
  load_threshold = res.load_threshold;
  for (std::size_t i = 0; i < pending.size(); ++i) {
    auto& f = pending[i];
    const auto& d = res.decisions[i];
    const bool ok = d.pm && admit(f, *d.pm);
    if (!ok) reject(f);
    if (keep_logs_) {
      decisions_.push_back({world_.tick, d.request, ok ? d.pm : std::nullopt, d.policy, d.u});
    }
    if (ok) world_.flows.push_back(f);
  }
}

void Simulation::apply_plan(const Plan& plan, double w, double system_temp) {
  const double done_at = world_.clock + config_.controller.migration_delay_s;
  for (const auto& a : plan) {
    PlanRecord rec{world_.tick, to_string(a.kind), std::nullopt, std::nullopt, std::nullopt,
                   w, system_temp, {}};
    switch (a.kind) {
      case ActionKind::PowerOn: {
        auto& pm = world_.pms.at(a.pm.index());
        if (!pm.is_on()) ++world_.counters.power_ons;
        pm.power_state = PowerState::On;
        pm.draining = false;
        pm.cpu_utilization = 0.0;
        pm.backlog = 0.0;
        pm.response_time_ms = config_.servers.response_time_initial_ms;
        rec.dst = a.pm;
        break;
      }
      case ActionKind::Migrate: {
        auto& v = world_.vnfs.at(a.vnf.index());
        if (v.host != a.src || v.migration || !world_.pms.at(a.dst.index()).is_on()) {
          throw Error("invalid migration of VNF " + std::to_string(a.vnf.value));
        }
        v.migration = Migration{a.dst, done_at};
        ++world_.counters.migrations;
        rec.vnf = a.vnf;
        rec.src = a.src;
        rec.dst = a.dst;
        break;
      }
      case ActionKind::PowerOff: {
        world_.pms.at(a.pm.index()).draining = true;
        rec.src = a.pm;
        break;
      }
    }
    if (keep_logs_) plans_.push_back(std::move(rec));
  }
  // Zero-delay migrations and empty sources settle immediately.
  finish_migrations(world_.clock);
}

void Simulation::run_vnf_controller(double& w, double& temp_threshold) {
  WorldView v = view();
  VnfTickResult res;
  try {
    res = vnf_tick(vnf_state_, v);
  } catch (const NoActivePm&) {
    return;
  }
  ops_.monitoring += 1;
  ops_.estimation += vnf_state_.per_pm_predictors.size();
  ops_.pid += 1;
  ops_.planning += 1;
  w = res.w;
  temp_threshold = res.temperature_threshold;
  if (keep_logs_) {
    for (const auto& msg : res.warnings) {
      plans_.push_back({world_.tick, "warning", std::nullopt, std::nullopt, std::nullopt, res.w,
                        res.system_temperature, msg});
    }
  }
  apply_plan(res.plan, res.w, res.system_temperature);
}

void Simulation::finish_migrations(double until) {
  for (auto& v : world_.vnfs) {
    if (!v.migration || v.migration->completes_at > until + kTimeEps) continue;
    const PmId src = v.host;
    const PmId dst = v.migration->destination;
    auto& from = world_.pms[src.index()].hosted_vnfs;
    from.erase(std::remove(from.begin(), from.end(), v.id), from.end());
    world_.pms[dst.index()].hosted_vnfs.push_back(v.id);
    std::sort(world_.pms[dst.index()].hosted_vnfs.begin(), world_.pms[dst.index()].hosted_vnfs.end());
    v.host = dst;
    v.migration.reset();
    for (auto& f : world_.flows) {
      if (f.vnf != v.id) continue;
      f.assigned_pm = dst;
      f.path = route(f.rsu, dst, f.bandwidth_mbps);
    }
  }
  for (auto& pm : world_.pms) {
    if (!pm.is_on() || !pm.draining || !pm.hosted_vnfs.empty()) continue;
    pm.power_state = PowerState::Off;
    pm.draining = false;
    pm.cpu_utilization = 0.0;
    pm.backlog = 0.0;
    pm.active_connections = 0;
    pm.response_time_ms = config_.servers.response_time_initial_ms;
    ++world_.counters.power_offs;
  }
}

void Simulation::serve(MetricsRecord& rec) {
  const auto& topo = world_.topology;
  const double dt = config_.controller.dt;
  const double t0 = world_.clock;
  const double t1 = t0 + dt;

  std::vector<double> frac(world_.flows.size());
  std::vector<bool> lost(world_.flows.size(), false);
  for (std::size_t i = 0; i < world_.flows.size(); ++i) {
    frac[i] = active_fraction(world_.flows[i], t0, t1);
  }

  // Link capacity: shed the newest sessions on an overloaded link.
  auto& links = world_.link_load_mbps;
  std::fill(links.begin(), links.end(), 0.0);
  for (std::size_t i = 0; i < world_.flows.size(); ++i) {
    for (const auto lid : world_.flows[i].path) links[lid.index()] += world_.flows[i].bandwidth_mbps * frac[i];
  }
  for (std::size_t l = 0; l < links.size(); ++l) {
    const double cap = topo.link(LinkId{static_cast<std::uint32_t>(l)}).capacity_mbps;
    if (links[l] <= cap) continue;
    std::vector<std::size_t> on_link;
    for (std::size_t i = 0; i < world_.flows.size(); ++i) {
      if (lost[i] || frac[i] == 0.0) continue;
      const auto& p = world_.flows[i].path;
      if (std::find(p.begin(), p.end(), LinkId{static_cast<std::uint32_t>(l)}) != p.end()) on_link.push_back(i);
    }
    std::sort(on_link.begin(), on_link.end(),
              [&](std::size_t a, std::size_t b) { return newer(&world_.flows[a], &world_.flows[b]); });
    for (const auto i : on_link) {
      if (links[l] <= cap) break;
      lost[i] = true;
      for (const auto lid : world_.flows[i].path) links[lid.index()] -= world_.flows[i].bandwidth_mbps * frac[i];
    }
  }

  // Server demand, splitting migrating instances between source and target.
  const std::size_t n_pm = world_.pms.size();
  std::vector<double> demand(n_pm, 0.0);
  std::vector<bool> vnf_busy(world_.vnfs.size(), false);
  auto share_on_source = [&](const Vnf& v) {
    if (!v.migration) return 1.0;
    return std::clamp((v.migration->completes_at - t0) / dt, 0.0, 1.0);
  };
  auto charge = [&](const Vnf& v, double units) {
    const double s = share_on_source(v);
    demand[v.host.index()] += units * s;
    if (v.migration) demand[v.migration->destination.index()] += units * (1.0 - s);
  };
  for (std::size_t i = 0; i < world_.flows.size(); ++i) {
    if (lost[i] || frac[i] == 0.0) continue;
    const auto& v = world_.vnfs[world_.flows[i].vnf->index()];
    vnf_busy[v.id.index()] = true;
    charge(v, world_.flows[i].cpu_demand * frac[i]);
  }
  for (const auto& v : world_.vnfs) {
    if (vnf_busy[v.id.index()]) charge(v, v.cpu_demand);
  }

  for (std::size_t p = 0; p < n_pm; ++p) {
    auto& pm = world_.pms[p];
    if (!pm.is_on()) {
      pm.cpu_utilization = 0.0;
      pm.backlog = 0.0;
      continue;
    }
    const double capacity = pm.cpu_capacity * dt;
    const double work = pm.backlog + demand[p] * dt;
    const double processed = std::min(work, capacity);
    pm.cpu_utilization = processed / capacity;
    pm.backlog = work - processed;
    const double bound = config_.servers.backlog_bound_s * pm.cpu_capacity;
    if (pm.backlog > bound) {
      std::vector<std::size_t> here;
      for (std::size_t i = 0; i < world_.flows.size(); ++i) {
        if (!lost[i] && frac[i] > 0.0 && world_.flows[i].assigned_pm == pm.id) here.push_back(i);
      }
      std::sort(here.begin(), here.end(),
                [&](std::size_t a, std::size_t b) { return newer(&world_.flows[a], &world_.flows[b]); });
      for (const auto i : here) {
        if (pm.backlog <= bound) break;
        lost[i] = true;
        pm.backlog -= world_.flows[i].cpu_demand * frac[i] * dt;
      }
      pm.backlog = std::clamp(pm.backlog, 0.0, bound);
    }
  }

  // Switch forwarding load.
  auto& sw_load = world_.switch_load_mbps;
  std::fill(sw_load.begin(), sw_load.end(), 0.0);
  for (std::size_t i = 0; i < world_.flows.size(); ++i) {
    if (lost[i] || frac[i] == 0.0) continue;
    const auto& f = world_.flows[i];
    for (const auto node : path_nodes(topo, topo.rsu_node(f.rsu), f.path)) {
      const std::size_t s = switch_index_[node.index()];
      if (s != kNoSwitch) sw_load[s] += f.bandwidth_mbps * frac[i];
    }
  }
  for (std::size_t s = 0; s < sw_load.size(); ++s) {
    const double cap = topo.node(topo.switches()[s]).forwarding_capacity_mbps;
    world_.switch_utilization[s] = std::min(1.0, sw_load[s] / cap);
  }

  // Session QoS, completions and response-time samples.
  double delay_sum = 0.0, jitter_sum = 0.0, setup_sum = 0.0;
  std::size_t carried = 0, jitter_n = 0, setup_n = 0, lost_now = 0;
  std::vector<double> rt_sum(n_pm, 0.0);
  std::vector<std::size_t> rt_n(n_pm, 0);
  for (std::size_t i = 0; i < world_.flows.size(); ++i) {
    auto& f = world_.flows[i];
    if (frac[i] == 0.0) continue;
    ++carried;
    if (lost[i]) {
      ++lost_now;
      continue;
    }
    const FlowQos q = flow_qos(f, world_, config_);
    delay_sum += q.delay_ms;
    if (f.last_delay_ms) {
      jitter_sum += q.jitter_ms;
      ++jitter_n;
    } else {
      setup_sum += q.setup_ms;
      ++setup_n;
    }
    f.last_delay_ms = q.delay_ms;
    if (f.end_time() <= t1) {
      rt_sum[f.assigned_pm->index()] += q.delay_ms;
      ++rt_n[f.assigned_pm->index()];
    }
  }
  const double alpha = config_.servers.response_time_smoothing;
  for (std::size_t p = 0; p < n_pm; ++p) {
    auto& pm = world_.pms[p];
    if (pm.is_on() && rt_n[p] > 0) {
      const double sample = rt_sum[p] / static_cast<double>(rt_n[p]);
      pm.response_time_ms = smooth_response_time(pm.response_time_ms, sample, alpha);
    }
  }

  const std::size_t served_ok = carried - lost_now;
  rec.active_flows = served_ok;
  rec.mean_delay_ms = served_ok ? delay_sum / static_cast<double>(served_ok) : 0.0;
  rec.mean_jitter_ms = jitter_n ? jitter_sum / static_cast<double>(jitter_n) : 0.0;
  rec.mean_setup_ms = setup_n ? setup_sum / static_cast<double>(setup_n) : 0.0;
  rec.loss_fraction = carried ? static_cast<double>(lost_now) / static_cast<double>(carried) : 0.0;
  rec.r_factor = r_factor(rec.mean_delay_ms, rec.loss_fraction);
  rec.mos = mos(rec.r_factor);

  // Retire finished and shed sessions.
  std::vector<FlowRequest> keep;
  keep.reserve(world_.flows.size());
  for (std::size_t i = 0; i < world_.flows.size(); ++i) {
    auto& f = world_.flows[i];
    const bool done = f.end_time() <= t1;
    if (lost[i] || done) {
      --flows_on_vnf_[f.vnf->index()];
      if (lost[i]) {
        f.status = FlowStatus::Lost;
        ++world_.counters.lost;
      } else {
        f.status = FlowStatus::Completed;
        ++world_.counters.served;
      }
      continue;
    }
    keep.push_back(std::move(f));
  }
  world_.flows = std::move(keep);

  // Power and utilization are charged before any server switches off, so a
  // draining server pays for the period it spent draining.
  rec.per_pm.resize(n_pm);
  std::vector<double> on_util;
  double temp_sum = 0.0;
  rec.total_power_w = 0.0;
  for (std::size_t p = 0; p < n_pm; ++p) {
    const auto& pm = world_.pms[p];
    auto& s = rec.per_pm[p];
    s.on = pm.is_on();
    s.utilization = pm.cpu_utilization;
    s.power_w = power_draw(pm, config_.power);
    rec.total_power_w += s.power_w;
    if (s.on) {
      on_util.push_back(pm.cpu_utilization);
      temp_sum += pm_temperature(pm.cpu_utilization, config_.controller.alpha, config_.controller.beta);
    }
  }
  rec.energy_j = rec.total_power_w * dt;
  rec.on_pm_count = on_util.size();
  rec.pm_spread_pp = on_util.empty() ? 0.0 : balance_spread(on_util);
  rec.system_temperature = on_util.empty() ? 0.0 : temp_sum / static_cast<double>(on_util.size());
  rec.per_switch_utilization = world_.switch_utilization;
  rec.switch_spread_pp = world_.switch_utilization.empty() ? 0.0 : balance_spread(world_.switch_utilization);

  finish_migrations(t1);

  for (auto& pm : world_.pms) pm.active_connections = 0;
  for (const auto& f : world_.flows) ++world_.pms[f.assigned_pm->index()].active_connections;
  for (std::size_t p = 0; p < n_pm; ++p) {
    rec.per_pm[p].connections = world_.pms[p].active_connections;
    rec.per_pm[p].vnfs = world_.pms[p].hosted_vnfs.size();
  }
  rec.vnf_count = world_.vnfs.size();
}

MetricsRecord Simulation::tick() {
  MetricsRecord rec;
  rec.tick = world_.tick;
  rec.time_s = world_.clock;

  std::vector<FlowRequest> pending;
  generate_arrivals(pending);

  double u = flow_state_.last_u;
  double load_estimate = flow_state_.last_system_load_estimate;
  double load_threshold = flow_state_.load_threshold;
  place(pending, u, load_estimate, load_threshold);

  double w = vnf_state_.last_w;
  double temp_threshold = vnf_state_.temperature_threshold;
  if (world_.mode == Mode::Proposed) run_vnf_controller(w, temp_threshold);

  serve(rec);

  rec.u = u;
  rec.load_estimate = load_estimate;
  rec.load_threshold = load_threshold;
  rec.w = w;
  rec.temperature_threshold = temp_threshold;
  const auto& c = world_.counters;
  rec.offered = c.offered;
  rec.served = c.served;
  rec.rejected = c.rejected;
  rec.lost = c.lost;
  rec.in_flight = world_.flows.size();

  world_.clock += config_.controller.dt;
  ++world_.tick;
  return rec;
}

}  // namespace sdiov
