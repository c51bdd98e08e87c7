#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "sdiov/batch.hpp"
#include "sdiov/config.hpp"
#include "sdiov/errors.hpp"
#include "sdiov/report.hpp"

using namespace sdiov;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("sdiov_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ScenarioSummary summary(double energy, double spread, double mos_v) {
  ScenarioSummary s;
  s.name = "x";
  s.mode = "proposed";
  s.seed = 1;
  s.vehicle_count = 300;
  s.duration_s = 600;
  s.total_energy_kwh = energy;
  s.mean_pm_spread_pp = spread;
  s.mean_mos = mos_v;
  return s;
}

}  // namespace

TEST_CASE("preset names map to vehicle counts") {
  CHECK(parse_config(R"({"scenario": "very_high"})").traffic.vehicle_count == 1500);
  CHECK(parse_config(R"({"scenario": "very_low"})").traffic.vehicle_count == 300);
  CHECK(*preset_vehicle_count("low") == 600);
  CHECK(*preset_vehicle_count("medium") == 900);
  CHECK(*preset_vehicle_count("high") == 1200);
  CHECK_FALSE(preset_vehicle_count("extreme"));
  CHECK(parse_config(R"({"scenario": "high"})").name == "high");
  CHECK(parse_config(R"({"scenario": "high", "name": "rush"})").name == "rush");
}

TEST_CASE("step size outside (0, 2) is a validation error") {
  try {
    parse_config(R"({"controller": {"zeta": 2.5}})");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.field() == "controller.zeta");
  }
  CHECK_THROWS_AS(parse_config(R"({"controller": {"xi": 0}})"), ValidationError);
}

TEST_CASE("empty file gives the defaults") {
  const auto dir = scratch("empty");
  std::ofstream(dir / "empty.json").close();
  const auto c = load_config((dir / "empty.json").string());
  CHECK(c.name == "default");
  CHECK(c == ScenarioConfig{});
}

TEST_CASE("unknown keys and malformed text") {
  CHECK_THROWS_AS(parse_config(R"({"nmae": "x"})"), ValidationError);
  CHECK_THROWS_AS(parse_config(R"({"traffic": {"vehicles": 3}})"), ValidationError);
  try {
    parse_config("{\"name\": }");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position() > 0);
  }
  CHECK_THROWS_AS(load_config("/nonexistent/file.json"), IoError);
}

TEST_CASE("config round trip") {
  ScenarioConfig c;
  c.name = "custom";
  c.seed = 77;
  c.mode = Mode::Traditional;
  c.controller.zeta = 0.3;
  c.controller.consolidation_ceiling = 0.7;
  c.traffic.vehicle_count = 1234;
  c.servers.vnfs_per_server = 4;
  c.output.plot = true;
  CHECK(parse_config(serialize_config(c)) == c);
  CHECK(parse_config(serialize_config(ScenarioConfig{})) == ScenarioConfig{});

  TopologyDefaults d;
  d.link_latency_ms = 3.5;
  c.topology = build_default_topology(d);
  c.default_topology = false;
  CHECK(parse_config(serialize_config(c)) == c);
}

TEST_CASE("topology files") {
  const std::string text = R"({"nodes": [
      {"name": "R", "kind": "rsu"}, {"name": "S", "kind": "switch", "forwarding_capacity_mbps": 500},
      {"name": "M", "kind": "server"}],
    "links": [{"name": "a", "a": "R", "b": "S", "capacity_mbps": 100, "latency_ms": 1},
              {"name": "b", "a": "S", "b": "M", "capacity_mbps": 100, "latency_ms": 1}]})";
  const auto t = parse_topology(text);
  CHECK(t.servers().size() == 1);
  CHECK(t.link_count() == 2);
  const std::string broken = R"({"nodes": [{"name": "R", "kind": "rsu"}, {"name": "M", "kind": "server"}],
    "links": []})";
  CHECK_THROWS_AS(parse_topology(broken), ValidationError);
}

TEST_CASE("compare arithmetic") {
  const auto a = summary(70, 2, 4.4);
  auto b = summary(100, 50, 4.1);
  b.mode = "traditional";
  const auto r = compare(a, b);
  CHECK(r.energy_reduction_pct == doctest::Approx(30.0));
  CHECK(r.pm_spread_delta_pp == doctest::Approx(-48));
  CHECK(r.mos_delta == doctest::Approx(0.3));

  const auto z = compare(a, a);
  CHECK(z.energy_reduction_pct == 0);
  CHECK(z.pm_spread_delta_pp == 0);
  CHECK(z.switch_spread_delta_pp == 0);
  CHECK(z.mos_delta == 0);
  CHECK(z.goodput_delta == 0);
  CHECK(z.loss_rate_delta == 0);

  auto other = b;
  other.seed = 2;
  CHECK_THROWS_AS(compare(a, other), MismatchedScenarios);
  other = b;
  other.name = "y";
  CHECK_THROWS_AS(compare(a, other), MismatchedScenarios);
}

TEST_CASE("comparison from two real runs matches the summaries") {
  ScenarioConfig c;
  c.duration_s = 120;
  c.traffic.vehicle_count = 300;
  const auto a = run_scenario(c, false).summary;
  c.mode = Mode::Traditional;
  const auto b = run_scenario(c, false).summary;
  const auto r = compare(a, b);
  CHECK(r.energy_reduction_pct ==
        doctest::Approx(100.0 * (b.total_energy_kwh - a.total_energy_kwh) / b.total_energy_kwh));
  CHECK(r.switch_spread_delta_pp == doctest::Approx(a.mean_switch_spread_pp - b.mean_switch_spread_pp));
  const auto j = nlohmann::json::parse(comparison_json(r));
  CHECK(j["mode_a"] == "proposed");
  CHECK(j["mode_b"] == "traditional");
}

TEST_CASE("csv header lists every record field once") {
  const auto t = build_default_topology();
  const auto h = csv_header(t);
  const std::set<std::string> unique(h.begin(), h.end());
  CHECK(unique.size() == h.size());
  // 2 + 5 per server + 1 per switch + 24 scalar fields
  CHECK(h.size() == 2 + 5 * 3 + 8 + 24);
  for (const char* col : {"tick", "time_s", "M1_utilization", "M3_vnfs", "S8_utilization", "offered",
                          "mos", "energy_j", "temperature_threshold"}) {
    CHECK(unique.count(col) == 1);
  }
}

TEST_CASE("csv rows") {
  ScenarioConfig c;
  c.duration_s = 30;
  c.traffic.vehicle_count = 300;
  const auto r = run_scenario(c, false);
  const auto csv = metrics_csv(c.topology, r.records);
  std::size_t lines = 0;
  for (char ch : csv) lines += ch == '\n';
  CHECK(lines == 31);
  CHECK(csv.find("\r\n") != std::string::npos);
  CHECK(csv.find(';') == std::string::npos);
}

TEST_CASE("summary json round trip") {
  ScenarioConfig c;
  c.duration_s = 60;
  c.traffic.vehicle_count = 600;
  const auto s = run_scenario(c, false).summary;
  const auto line = summary_json(s);
  CHECK(line.back() == '\n');
  CHECK(summary_from_json(line) == s);
  CHECK_THROWS_AS(summary_from_json("{}"), ValidationError);
  CHECK_THROWS_AS(summary_from_json("{"), ParseError);
}

TEST_CASE("decision and plan logs are one object per line") {
  ScenarioConfig c;
  c.duration_s = 60;
  c.traffic.vehicle_count = 300;
  const auto r = run_scenario(c, true);
  const auto d = decisions_jsonl(r.decisions);
  std::istringstream in(d);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j.contains("tick"));
    CHECK(j.contains("request"));
    CHECK(j.contains("pm"));
    CHECK(j.contains("policy"));
    CHECK(j.contains("u"));
    ++n;
  }
  CHECK(n == r.decisions.size());
  for (const auto& p : r.plans) CHECK(!p.action.empty());
}

TEST_CASE("charts are svg documents") {
  ScenarioConfig c;
  c.duration_s = 20;
  const auto r = run_scenario(c, false);
  const auto cs = charts(c.topology, r.records, "t & <x>");
  CHECK(cs.size() == 7);
  for (const auto& ch : cs) {
    CHECK(ch.svg.rfind("<svg", 0) == 0);
    CHECK(ch.svg.find("</svg>") != std::string::npos);
    CHECK(ch.svg.find("<x>") == std::string::npos);
  }
}

TEST_CASE("output set commits atomically and cleans up on failure") {
  const auto dir = scratch("outset");
  {
    OutputSet out(dir.string());
    out.stage("a.txt", "hello");
    CHECK(fs::exists(dir / "a.txt.tmp"));
    CHECK_FALSE(fs::exists(dir / "a.txt"));
    out.commit();
  }
  CHECK(read(dir / "a.txt") == "hello");
  CHECK_FALSE(fs::exists(dir / "a.txt.tmp"));
  {
    OutputSet out(dir.string());
    out.stage("b.txt", "partial");
    // dropped without commit, as after an exception
  }
  CHECK_FALSE(fs::exists(dir / "b.txt"));
  CHECK_FALSE(fs::exists(dir / "b.txt.tmp"));
}

TEST_CASE("serial and parallel batches agree") {
  ScenarioConfig base;
  base.duration_s = 60;
  const auto configs = sweep_configs(base);
  CHECK(configs.size() == 10);
  CHECK(configs[0].name == "very_low");
  CHECK(configs[0].mode == Mode::Proposed);
  CHECK(configs[1].mode == Mode::Traditional);
  CHECK(configs[9].traffic.vehicle_count == 1500);
  CHECK(run_batch_serial(configs) == run_batch_parallel(configs));
}

TEST_CASE("run stem") {
  ScenarioSummary s;
  s.name = "low";
  s.mode = "traditional";
  s.seed = 4;
  CHECK(run_stem(s) == "low_traditional_s4");
}
