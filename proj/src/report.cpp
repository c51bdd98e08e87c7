#include "sdiov/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "sdiov/errors.hpp"

namespace sdiov {

namespace {

using json = nlohmann::json;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

const char* kRecordColumns[] = {
    "offered",       "served",         "rejected",       "lost",
    "in_flight",     "active_flows",   "mean_delay_ms",  "mean_jitter_ms",
    "mean_setup_ms", "loss_fraction",  "r_factor",       "mos",
    "system_temperature", "on_pm_count", "vnf_count",    "pm_spread_pp",
    "switch_spread_pp",   "total_power_w", "energy_j",   "load_estimate",
    "u",             "w",              "load_threshold", "temperature_threshold",
};

}  // namespace

std::vector<std::string> csv_header(const Topology& topology) {
  std::vector<std::string> h = {"tick", "time_s"};
  for (const auto id : topology.servers()) {
    const auto& n = topology.node(id).name;
    for (const char* f : {"on", "utilization", "power_w", "connections", "vnfs"}) h.push_back(n + "_" + f);
  }
  for (const auto id : topology.switches()) h.push_back(topology.node(id).name + "_utilization");
  for (const char* c : kRecordColumns) h.emplace_back(c);
  return h;
}

std::string metrics_csv(const Topology& topology, const std::vector<MetricsRecord>& records) {
  std::string out;
  const auto header = csv_header(topology);
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += csv_field(header[i]);
  }
  out += "\r\n";
  for (const auto& r : records) {
    std::vector<std::string> row = {std::to_string(r.tick), num(r.time_s)};
    for (const auto& p : r.per_pm) {
      row.push_back(p.on ? "1" : "0");
      row.push_back(num(p.utilization));
      row.push_back(num(p.power_w));
      row.push_back(std::to_string(p.connections));
      row.push_back(std::to_string(p.vnfs));
    }
    for (const double s : r.per_switch_utilization) row.push_back(num(s));
    for (const auto c : {r.offered, r.served, r.rejected, r.lost, r.in_flight}) row.push_back(std::to_string(c));
    row.push_back(std::to_string(r.active_flows));
    for (const double v : {r.mean_delay_ms, r.mean_jitter_ms, r.mean_setup_ms, r.loss_fraction, r.r_factor, r.mos,
                           r.system_temperature}) {
      row.push_back(num(v));
    }
    row.push_back(std::to_string(r.on_pm_count));
    row.push_back(std::to_string(r.vnf_count));
    for (const double v : {r.pm_spread_pp, r.switch_spread_pp, r.total_power_w, r.energy_j, r.load_estimate, r.u,
                           r.w, r.load_threshold, r.temperature_threshold}) {
      row.push_back(num(v));
    }
    if (row.size() != header.size()) throw Error("record shape does not match the topology");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i];
    }
    out += "\r\n";
  }
  return out;
}

std::string summary_json(const ScenarioSummary& s) {
  json j = {
      {"name", s.name},
      {"mode", s.mode},
      {"seed", s.seed},
      {"vehicle_count", s.vehicle_count},
      {"duration_s", s.duration_s},
      {"ticks", s.ticks},
      {"mean_pm_utilization", s.mean_pm_utilization},
      {"pm_mean_utilization", s.pm_mean_utilization},
      {"switch_mean_utilization", s.switch_mean_utilization},
      {"mean_pm_spread_pp", s.mean_pm_spread_pp},
      {"mean_switch_spread_pp", s.mean_switch_spread_pp},
      {"total_energy_kwh", s.total_energy_kwh},
      {"mean_power_w", s.mean_power_w},
      {"mean_on_pms", s.mean_on_pms},
      {"offered", s.offered},
      {"served", s.served},
      {"rejected", s.rejected},
      {"lost", s.lost},
      {"in_flight", s.in_flight},
      {"goodput", s.goodput},
      {"loss_rate", s.loss_rate},
      {"mean_delay_ms", s.mean_delay_ms},
      {"mean_jitter_ms", s.mean_jitter_ms},
      {"mean_setup_ms", s.mean_setup_ms},
      {"mean_r_factor", s.mean_r_factor},
      {"mean_mos", s.mean_mos},
      {"mean_system_temperature", s.mean_system_temperature},
      {"migrations", s.migrations},
      {"power_ons", s.power_ons},
      {"power_offs", s.power_offs},
      {"monitoring_ops", s.monitoring_ops},
      {"estimation_ops", s.estimation_ops},
      {"pid_ops", s.pid_ops},
      {"selection_ops", s.selection_ops},
      {"planning_ops", s.planning_ops},
  };
  return j.dump() + "\n";
}

ScenarioSummary summary_from_json(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(e.byte, e.what());
  }
  ScenarioSummary s;
  try {
    s.name = j.at("name").get<std::string>();
    s.mode = j.at("mode").get<std::string>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.vehicle_count = j.at("vehicle_count").get<std::uint32_t>();
    s.duration_s = j.at("duration_s").get<double>();
    s.ticks = j.at("ticks").get<std::size_t>();
    s.mean_pm_utilization = j.at("mean_pm_utilization").get<double>();
    s.pm_mean_utilization = j.at("pm_mean_utilization").get<std::vector<double>>();
    s.switch_mean_utilization = j.at("switch_mean_utilization").get<std::vector<double>>();
    s.mean_pm_spread_pp = j.at("mean_pm_spread_pp").get<double>();
    s.mean_switch_spread_pp = j.at("mean_switch_spread_pp").get<double>();
    s.total_energy_kwh = j.at("total_energy_kwh").get<double>();
    s.mean_power_w = j.at("mean_power_w").get<double>();
    s.mean_on_pms = j.at("mean_on_pms").get<double>();
    s.offered = j.at("offered").get<std::uint64_t>();
    s.served = j.at("served").get<std::uint64_t>();
    s.rejected = j.at("rejected").get<std::uint64_t>();
    s.lost = j.at("lost").get<std::uint64_t>();
    s.in_flight = j.at("in_flight").get<std::uint64_t>();
    s.goodput = j.at("goodput").get<double>();
    s.loss_rate = j.at("loss_rate").get<double>();
    s.mean_delay_ms = j.at("mean_delay_ms").get<double>();
    s.mean_jitter_ms = j.at("mean_jitter_ms").get<double>();
    s.mean_setup_ms = j.at("mean_setup_ms").get<double>();
    s.mean_r_factor = j.at("mean_r_factor").get<double>();
    s.mean_mos = j.at("mean_mos").get<double>();
    s.mean_system_temperature = j.at("mean_system_temperature").get<double>();
    s.migrations = j.at("migrations").get<std::uint64_t>();
    s.power_ons = j.at("power_ons").get<std::uint64_t>();
    s.power_offs = j.at("power_offs").get<std::uint64_t>();
    s.monitoring_ops = j.at("monitoring_ops").get<std::uint64_t>();
    s.estimation_ops = j.at("estimation_ops").get<std::uint64_t>();
    s.pid_ops = j.at("pid_ops").get<std::uint64_t>();
    s.selection_ops = j.at("selection_ops").get<std::uint64_t>();
    s.planning_ops = j.at("planning_ops").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ValidationError("summary", e.what());
  }
  return s;
}

std::string decisions_jsonl(const std::vector<DecisionRecord>& decisions) {
  std::string out;
  for (const auto& d : decisions) {
    json j = {{"tick", d.tick},
              {"request", d.request.value},
              {"pm", d.pm ? json(d.pm->value) : json(nullptr)},
              {"policy", to_string(d.policy)},
              {"u", d.u}};
    out += j.dump() + "\n";
  }
  return out;
}

std::string plans_jsonl(const std::vector<PlanRecord>& plans) {
  std::string out;
  auto opt = [](const auto& o) { return o ? json(o->value) : json(nullptr); };
  for (const auto& p : plans) {
    json j = {{"tick", p.tick},      {"action", p.action}, {"vnf", opt(p.vnf)},
              {"src", opt(p.src)},   {"dst", opt(p.dst)},  {"w", p.w},
              {"system_temperature", p.system_temperature}};
    if (!p.note.empty()) j["note"] = p.note;
    out += j.dump() + "\n";
  }
  return out;
}

ComparisonReport compare(const ScenarioSummary& a, const ScenarioSummary& b) {
  if (a.name != b.name) throw MismatchedScenarios("names differ (" + a.name + " vs " + b.name + ")");
  if (a.seed != b.seed) {
    throw MismatchedScenarios("seeds differ (" + std::to_string(a.seed) + " vs " + std::to_string(b.seed) + ")");
  }
  if (a.vehicle_count != b.vehicle_count) throw MismatchedScenarios("vehicle counts differ");
  if (a.duration_s != b.duration_s) throw MismatchedScenarios("durations differ");
  ComparisonReport r;
  r.name = a.name;
  r.seed = a.seed;
  r.vehicle_count = a.vehicle_count;
  r.mode_a = a.mode;
  r.mode_b = b.mode;
  r.energy_reduction_pct =
      b.total_energy_kwh > 0.0 ? (b.total_energy_kwh - a.total_energy_kwh) / b.total_energy_kwh * 100.0 : 0.0;
  r.pm_spread_delta_pp = a.mean_pm_spread_pp - b.mean_pm_spread_pp;
  r.switch_spread_delta_pp = a.mean_switch_spread_pp - b.mean_switch_spread_pp;
  r.mos_delta = a.mean_mos - b.mean_mos;
  r.r_factor_delta = a.mean_r_factor - b.mean_r_factor;
  r.goodput_delta = a.goodput - b.goodput;
  r.loss_rate_delta = a.loss_rate - b.loss_rate;
  r.delay_delta_ms = a.mean_delay_ms - b.mean_delay_ms;
  return r;
}

std::string comparison_json(const ComparisonReport& r) {
  json j = {{"name", r.name},
            {"seed", r.seed},
            {"vehicle_count", r.vehicle_count},
            {"mode_a", r.mode_a},
            {"mode_b", r.mode_b},
            {"energy_reduction_pct", r.energy_reduction_pct},
            {"pm_spread_delta_pp", r.pm_spread_delta_pp},
            {"switch_spread_delta_pp", r.switch_spread_delta_pp},
            {"mos_delta", r.mos_delta},
            {"r_factor_delta", r.r_factor_delta},
            {"goodput_delta", r.goodput_delta},
            {"loss_rate_delta", r.loss_rate_delta},
            {"delay_delta_ms", r.delay_delta_ms}};
  return j.dump(2) + "\n";
}

namespace {

struct Series {
  std::string label;
  std::vector<double> y;
};

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string line_chart(const std::string& title, const std::string& y_label, const std::vector<double>& x,
                       const std::vector<Series>& series) {
  const double W = 860, H = 360, left = 70, right = 170, top = 40, bottom = 50;
  const double pw = W - left - right, ph = H - top - bottom;
  double x0 = x.empty() ? 0.0 : x.front(), x1 = x.empty() ? 1.0 : x.back();
  if (x1 <= x0) x1 = x0 + 1.0;
  double y0 = 0.0, y1 = 0.0;
  for (const auto& s : series) {
    for (const double v : s.y) {
      if (std::isfinite(v)) {
        y0 = std::min(y0, v);
        y1 = std::max(y1, v);
      }
    }
  }
  if (y1 <= y0) y1 = y0 + 1.0;
  y1 += 0.05 * (y1 - y0);
  auto px = [&](double v) { return left + (v - x0) / (x1 - x0) * pw; };
  auto py = [&](double v) { return top + ph - (v - y0) / (y1 - y0) * ph; };

  std::string o;
  o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(W) + "\" height=\"" + num(H) +
       "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o += "<text x=\"" + num(left) + "\" y=\"22\" font-size=\"15\">" + escape_xml(title) + "</text>\n";
  o += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
       "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double yv = y0 + (y1 - y0) * i / 4.0;
    const double xv = x0 + (x1 - x0) * i / 4.0;
    o += "<line x1=\"" + num(left) + "\" x2=\"" + num(left + pw) + "\" y1=\"" + num(py(yv)) + "\" y2=\"" +
         num(py(yv)) + "\" stroke=\"#ddd\"/>\n";
    char lab[32];
    std::snprintf(lab, sizeof lab, "%.3g", yv);
    o += "<text x=\"" + num(left - 6) + "\" y=\"" + num(py(yv) + 4) + "\" text-anchor=\"end\">" + lab + "</text>\n";
    std::snprintf(lab, sizeof lab, "%.0f", xv);
    o += "<text x=\"" + num(px(xv)) + "\" y=\"" + num(top + ph + 18) + "\" text-anchor=\"middle\">" + lab +
         "</text>\n";
  }
  o += "<text x=\"" + num(left + pw / 2) + "\" y=\"" + num(H - 10) + "\" text-anchor=\"middle\">time (s)</text>\n";
  o += "<text transform=\"translate(16," + num(top + ph / 2) + ") rotate(-90)\" text-anchor=\"middle\">" +
       escape_xml(y_label) + "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = kPalette[k % (sizeof kPalette / sizeof kPalette[0])];
    o += "<polyline fill=\"none\" stroke-width=\"1.4\" stroke=\"" + std::string(color) + "\" points=\"";
    const auto& s = series[k];
    for (std::size_t i = 0; i < s.y.size() && i < x.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      o += num(px(x[i])) + "," + num(py(s.y[i])) + " ";
    }
    o += "\"/>\n";
    const double ly = top + 14 + 16.0 * static_cast<double>(k);
    o += "<line x1=\"" + num(left + pw + 12) + "\" x2=\"" + num(left + pw + 32) + "\" y1=\"" + num(ly - 4) +
         "\" y2=\"" + num(ly - 4) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    o += "<text x=\"" + num(left + pw + 38) + "\" y=\"" + num(ly) + "\">" + escape_xml(s.label) + "</text>\n";
  }
  o += "</svg>\n";
  return o;
}

}  // namespace

std::vector<Chart> charts(const Topology& topology, const std::vector<MetricsRecord>& records,
                          const std::string& title) {
  std::vector<double> x;
  for (const auto& r : records) x.push_back(r.time_s);
  auto pick = [&](auto f) {
    std::vector<double> v;
    for (const auto& r : records) v.push_back(f(r));
    return v;
  };
  std::vector<Chart> out;

  std::vector<Series> pms;
  for (std::size_t i = 0; i < topology.servers().size(); ++i) {
    pms.push_back({topology.node(topology.servers()[i]).name,
                   pick([i](const MetricsRecord& r) { return i < r.per_pm.size() ? 100.0 * r.per_pm[i].utilization : 0.0; })});
  }
  out.push_back({"cpu", line_chart(title + ": server CPU", "utilization (%)", x, pms)});

  std::vector<Series> sws;
  for (std::size_t i = 0; i < topology.switches().size(); ++i) {
    sws.push_back({topology.node(topology.switches()[i]).name,
                   pick([i](const MetricsRecord& r) {
                     return i < r.per_switch_utilization.size() ? 100.0 * r.per_switch_utilization[i] : 0.0;
                   })});
  }
  out.push_back({"switches", line_chart(title + ": switch load", "utilization (%)", x, sws)});

  out.push_back({"power", line_chart(title + ": power", "W", x,
                                     {{"total", pick([](const MetricsRecord& r) { return r.total_power_w; })},
                                      {"servers on", pick([](const MetricsRecord& r) {
                                         return 100.0 * static_cast<double>(r.on_pm_count);
                                       })}})});
  out.push_back({"qos", line_chart(title + ": delay", "ms", x,
                                   {{"delay", pick([](const MetricsRecord& r) { return r.mean_delay_ms; })},
                                    {"jitter", pick([](const MetricsRecord& r) { return r.mean_jitter_ms; })},
                                    {"setup", pick([](const MetricsRecord& r) { return r.mean_setup_ms; })}})});
  out.push_back({"mos", line_chart(title + ": voice quality", "score", x,
                                   {{"MOS", pick([](const MetricsRecord& r) { return r.mos; })},
                                    {"R / 20", pick([](const MetricsRecord& r) { return r.r_factor / 20.0; })},
                                    {"loss %", pick([](const MetricsRecord& r) { return 100.0 * r.loss_fraction; })}})});
  out.push_back({"goodput", line_chart(title + ": requests", "count", x,
                                       {{"offered", pick([](const MetricsRecord& r) { return double(r.offered); })},
                                        {"served", pick([](const MetricsRecord& r) { return double(r.served); })},
                                        {"rejected+lost", pick([](const MetricsRecord& r) {
                                           return double(r.rejected + r.lost);
                                         })}})});
  out.push_back({"controller", line_chart(title + ": controllers", "value", x,
                                          {{"u", pick([](const MetricsRecord& r) { return r.u; })},
                                           {"w", pick([](const MetricsRecord& r) { return r.w; })},
                                           {"load est.", pick([](const MetricsRecord& r) { return r.load_estimate; })},
                                           {"temperature", pick([](const MetricsRecord& r) {
                                              return r.system_temperature;
                                            })}})});
  return out;
}

OutputSet::OutputSet(std::string dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw IoError("cannot create " + dir_ + ": " + ec.message());
}

OutputSet::~OutputSet() {
  std::error_code ec;
  for (const auto& [tmp, final_path] : staged_) std::filesystem::remove(tmp, ec);
}

void OutputSet::stage(const std::string& filename, const std::string& content) {
  const auto final_path = (std::filesystem::path(dir_) / filename).string();
  const auto tmp = final_path + ".tmp";
  staged_.emplace_back(tmp, final_path);
  std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + tmp);
  out << content;
  out.close();
  if (!out) throw IoError("cannot write " + tmp);
}

void OutputSet::commit() {
  for (const auto& [tmp, final_path] : staged_) {
    std::error_code ec;
    std::filesystem::rename(tmp, final_path, ec);
    if (ec) throw IoError("cannot rename " + tmp + ": " + ec.message());
    done_.push_back(final_path);
  }
  staged_.clear();
}

std::string run_stem(const ScenarioSummary& s) {
  return s.name + "_" + s.mode + "_s" + std::to_string(s.seed);
}

}  // namespace sdiov
