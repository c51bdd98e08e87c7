#include "sdiov/config.hpp"

#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"
#include "sdiov/errors.hpp"

namespace sdiov {

namespace {

using json = nlohmann::json;

// Reads typed fields out of one JSON object and remembers which keys were
// used, so leftovers can be reported as unknown.
class Section {
 public:
  Section(const json& j, std::string prefix) : j_(j), prefix_(std::move(prefix)) {
    if (!j_.is_object()) throw ValidationError(where(""), "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json* get(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out) {
    if (const json* v = get(key)) {
      if (!v->is_number()) throw ValidationError(where(key), "expected a number");
      out = v->get<double>();
    }
  }

  void optional_number(const std::string& key, std::optional<double>& out) {
    if (const json* v = get(key)) {
      if (v->is_null()) {
        out.reset();
        return;
      }
      if (!v->is_number()) throw ValidationError(where(key), "expected a number or null");
      out = v->get<double>();
    }
  }

  template <class T>
  void count(const std::string& key, T& out) {
    if (const json* v = get(key)) {
      if (!v->is_number_unsigned()) throw ValidationError(where(key), "expected a non-negative integer");
      const auto raw = v->get<unsigned long long>();
      if (raw > std::numeric_limits<T>::max()) throw ValidationError(where(key), "out of range");
      out = static_cast<T>(raw);
    }
  }

  void boolean(const std::string& key, bool& out) {
    if (const json* v = get(key)) {
      if (!v->is_boolean()) throw ValidationError(where(key), "expected true or false");
      out = v->get<bool>();
    }
  }

  void string(const std::string& key, std::string& out) {
    if (const json* v = get(key)) {
      if (!v->is_string()) throw ValidationError(where(key), "expected a string");
      out = v->get<std::string>();
    }
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw ValidationError(where(it.key()), "unknown key");
    }
  }

  std::string where(const std::string& key) const {
    if (prefix_.empty()) return key;
    return key.empty() ? prefix_ : prefix_ + "." + key;
  }

 private:
  const json& j_;
  std::string prefix_;
  std::set<std::string> seen_;
};

void read_gains(Section& parent, const std::string& key, PidGains& g) {
  if (const json* v = parent.get(key)) {
    Section s(*v, parent.where(key));
    s.number("kp", g.kp);
    s.number("ki", g.ki);
    s.number("kd", g.kd);
    s.finish();
  }
}

NodeKind kind_from_string(const std::string& s, const std::string& field) {
  if (s == "rsu") return NodeKind::Rsu;
  if (s == "switch") return NodeKind::Switch;
  if (s == "server") return NodeKind::Server;
  throw ValidationError(field, "node kind must be rsu, switch or server");
}

const char* kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::Rsu: return "rsu";
    case NodeKind::Switch: return "switch";
    case NodeKind::Server: return "server";
  }
  return "switch";
}

Topology read_topology(const json& v) {
  Section top(v, "topology");
  Topology t;
  const json* nodes = top.get("nodes");
  const json* links = top.get("links");
  top.finish();
  if (!nodes || !nodes->is_array()) throw ValidationError("topology.nodes", "expected an array");
  if (!links || !links->is_array()) throw ValidationError("topology.links", "expected an array");
  for (std::size_t i = 0; i < nodes->size(); ++i) {
    Section n((*nodes)[i], "topology.nodes[" + std::to_string(i) + "]");
    std::string name, kind = "switch";
    double cap = 0.0;
    n.string("name", name);
    n.string("kind", kind);
    n.number("forwarding_capacity_mbps", cap);
    n.finish();
    if (name.empty()) throw ValidationError(n.where("name"), "must not be empty");
    t.add_node(kind_from_string(kind, n.where("kind")), name, cap);
  }
  for (std::size_t i = 0; i < links->size(); ++i) {
    Section l((*links)[i], "topology.links[" + std::to_string(i) + "]");
    std::string name, a, b;
    double cap = 1000.0, lat = 2.0;
    l.string("name", name);
    l.string("a", a);
    l.string("b", b);
    l.number("capacity_mbps", cap);
    l.number("latency_ms", lat);
    l.finish();
    try {
      t.add_link(name, t.find_node(a), t.find_node(b), cap, lat);
    } catch (const ValidationError&) {
      throw;
    } catch (const Error& e) {
      throw ValidationError(l.where("a"), e.what());
    }
  }
  return t;
}

json write_topology(const Topology& t) {
  json nodes = json::array();
  for (const auto& n : t.nodes()) {
    nodes.push_back({{"name", n.name}, {"kind", kind_name(n.kind)},
                     {"forwarding_capacity_mbps", n.forwarding_capacity_mbps}});
  }
  json links = json::array();
  for (const auto& l : t.links()) {
    links.push_back({{"name", l.name},
                     {"a", t.node(l.a).name},
                     {"b", t.node(l.b).name},
                     {"capacity_mbps", l.capacity_mbps},
                     {"latency_ms", l.latency_ms}});
  }
  return {{"nodes", nodes}, {"links", links}};
}

json gains_json(const PidGains& g) { return {{"kp", g.kp}, {"ki", g.ki}, {"kd", g.kd}}; }

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig c;
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    validate(c);
    return c;
  }
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.byte, e.what());
  }

  Section s(root, "");
  bool named = s.has("name");
  s.string("name", c.name);
  if (const json* v = s.get("scenario")) {
    if (!v->is_string()) throw ValidationError("scenario", "expected a string");
    const auto preset = v->get<std::string>();
    const auto count = preset_vehicle_count(preset);
    if (!count) throw ValidationError("scenario", "unknown preset '" + preset + "'");
    c.traffic.vehicle_count = *count;
    if (!named) c.name = preset;
  }
  s.number("duration_s", c.duration_s);
  s.count("seed", c.seed);
  if (const json* v = s.get("mode")) {
    if (!v->is_string()) throw ValidationError("mode", "expected a string");
    c.mode = mode_from_string(v->get<std::string>());
  }
  if (const json* v = s.get("topology")) {
    if (v->is_string()) {
      if (v->get<std::string>() != "default") throw ValidationError("topology", "expected \"default\" or an object");
    } else {
      c.topology = read_topology(*v);
      c.default_topology = false;
    }
  }
  if (const json* v = s.get("controller")) {
    Section k(*v, "controller");
    auto& p = c.controller;
    k.number("target_load", p.target_load);
    k.number("target_temperature", p.target_temperature);
    read_gains(k, "load_gains", p.load_gains);
    read_gains(k, "temperature_gains", p.temperature_gains);
    k.number("dt", p.dt);
    k.number("integral_limit", p.integral_limit);
    k.number("delta", p.delta);
    k.number("theta", p.theta);
    k.number("alpha", p.alpha);
    k.number("beta", p.beta);
    k.number("deadband", p.deadband);
    k.count("window", p.window);
    k.number("zeta", p.zeta);
    k.number("xi", p.xi);
    k.number("migration_delay_s", p.migration_delay_s);
    k.optional_number("consolidation_ceiling", p.consolidation_ceiling);
    k.count("startup_hold", p.startup_hold);
    k.finish();
  }
  if (const json* v = s.get("traffic")) {
    Section t(*v, "traffic");
    auto& p = c.traffic;
    t.count("vehicle_count", p.vehicle_count);
    t.number("request_rate_per_vehicle", p.request_rate_per_vehicle);
    t.number("mean_duration_s", p.mean_duration_s);
    t.number("cpu_demand_min", p.cpu_demand_min);
    t.number("cpu_demand_max", p.cpu_demand_max);
    t.number("bandwidth_min_mbps", p.bandwidth_min_mbps);
    t.number("bandwidth_max_mbps", p.bandwidth_max_mbps);
    t.number("intensity_sigma", p.intensity_sigma);
    t.finish();
  }
  if (const json* v = s.get("servers")) {
    Section t(*v, "servers");
    auto& p = c.servers;
    t.number("cpu_capacity", p.cpu_capacity);
    t.count("vnfs_per_server", p.vnfs_per_server);
    t.number("vnf_cpu_demand", p.vnf_cpu_demand);
    t.number("backlog_bound_s", p.backlog_bound_s);
    t.number("response_time_smoothing", p.response_time_smoothing);
    t.number("response_time_initial_ms", p.response_time_initial_ms);
    t.finish();
  }
  if (const json* v = s.get("power")) {
    Section t(*v, "power");
    t.number("idle_w", c.power.idle_w);
    t.number("peak_w", c.power.peak_w);
    t.finish();
  }
  if (const json* v = s.get("qos")) {
    Section t(*v, "qos");
    t.number("base_queueing_ms", c.qos.base_queueing_ms);
    t.number("queueing_epsilon", c.qos.queueing_epsilon);
    t.finish();
  }
  if (const json* v = s.get("output")) {
    Section t(*v, "output");
    t.string("dir", c.output.dir);
    t.boolean("plot", c.output.plot);
    t.finish();
  }
  s.finish();
  validate(c);
  return c;
}

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path);
  return buf.str();
}

}  // namespace

ScenarioConfig load_config(const std::string& path) { return parse_config(slurp(path)); }

Topology parse_topology(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.byte, e.what());
  }
  Topology t = read_topology(root);
  try {
    t.validate();
  } catch (const ValidationError&) {
    throw;
  } catch (const Error& e) {
    throw ValidationError("topology", e.what());
  }
  return t;
}

Topology load_topology(const std::string& path) { return parse_topology(slurp(path)); }

std::string serialize_config(const ScenarioConfig& c) {
  const auto& k = c.controller;
  json controller = {
      {"target_load", k.target_load},
      {"target_temperature", k.target_temperature},
      {"load_gains", gains_json(k.load_gains)},
      {"temperature_gains", gains_json(k.temperature_gains)},
      {"dt", k.dt},
      {"integral_limit", k.integral_limit},
      {"delta", k.delta},
      {"theta", k.theta},
      {"alpha", k.alpha},
      {"beta", k.beta},
      {"deadband", k.deadband},
      {"window", k.window},
      {"zeta", k.zeta},
      {"xi", k.xi},
      {"migration_delay_s", k.migration_delay_s},
      {"consolidation_ceiling", k.consolidation_ceiling ? json(*k.consolidation_ceiling) : json(nullptr)},
      {"startup_hold", k.startup_hold},
  };
  const auto& t = c.traffic;
  json traffic = {
      {"vehicle_count", t.vehicle_count},
      {"request_rate_per_vehicle", t.request_rate_per_vehicle},
      {"mean_duration_s", t.mean_duration_s},
      {"cpu_demand_min", t.cpu_demand_min},
      {"cpu_demand_max", t.cpu_demand_max},
      {"bandwidth_min_mbps", t.bandwidth_min_mbps},
      {"bandwidth_max_mbps", t.bandwidth_max_mbps},
      {"intensity_sigma", t.intensity_sigma},
  };
  const auto& sv = c.servers;
  json servers = {
      {"cpu_capacity", sv.cpu_capacity},
      {"vnfs_per_server", sv.vnfs_per_server},
      {"vnf_cpu_demand", sv.vnf_cpu_demand},
      {"backlog_bound_s", sv.backlog_bound_s},
      {"response_time_smoothing", sv.response_time_smoothing},
      {"response_time_initial_ms", sv.response_time_initial_ms},
  };
  json root = {
      {"name", c.name},
      {"duration_s", c.duration_s},
      {"seed", c.seed},
      {"mode", to_string(c.mode)},
      {"topology", c.default_topology ? json("default") : write_topology(c.topology)},
      {"controller", controller},
      {"traffic", traffic},
      {"servers", servers},
      {"power", {{"idle_w", c.power.idle_w}, {"peak_w", c.power.peak_w}}},
      {"qos", {{"base_queueing_ms", c.qos.base_queueing_ms}, {"queueing_epsilon", c.qos.queueing_epsilon}}},
      {"output", {{"dir", c.output.dir}, {"plot", c.output.plot}}},
  };
  return root.dump(2) + "\n";
}

}  // namespace sdiov
