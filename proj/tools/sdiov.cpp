// Command-line front end: run, compare, sweep.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "sdiov/batch.hpp"
#include "sdiov/config.hpp"
#include "sdiov/errors.hpp"
#include "sdiov/report.hpp"

namespace {

using namespace sdiov;

struct CommonOpts {
  std::string config;
  std::string scenario;
  std::string mode = "proposed";
  std::optional<std::uint64_t> seed;
  std::optional<double> duration;
  std::string out;
  bool plot = false;
  std::string topology;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool mode_both_default) {
  if (mode_both_default) o.mode = "both";
  cmd->add_option("--config", o.config, "scenario JSON file");
  cmd->add_option("--scenario", o.scenario, "preset: very_low, low, medium, high, very_high");
  cmd->add_option("--mode", o.mode, "proposed, traditional or both")->capture_default_str();
  cmd->add_option("--duration", o.duration, "simulated seconds");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_flag("--plot", o.plot, "also write SVG charts");
  cmd->add_option("--topology", o.topology, "topology JSON file (nodes, links)");
}

ScenarioConfig base_config(const CommonOpts& o) {
  ScenarioConfig c = o.config.empty() ? parse_config("") : load_config(o.config);
  if (!o.scenario.empty()) {
    const auto n = preset_vehicle_count(o.scenario);
    if (!n) throw ValidationError("scenario", "unknown preset '" + o.scenario + "'");
    c.traffic.vehicle_count = *n;
    c.name = o.scenario;
  }
  if (o.seed) c.seed = *o.seed;
  if (o.duration) c.duration_s = *o.duration;
  if (!o.out.empty()) c.output.dir = o.out;
  if (o.plot) c.output.plot = true;
  if (!o.topology.empty()) {
    c.topology = load_topology(o.topology);
    c.default_topology = false;
  }
  validate(c);
  return c;
}

std::vector<Mode> modes_of(const std::string& m) {
  if (m == "both") return {Mode::Proposed, Mode::Traditional};
  return {mode_from_string(m)};
}

void stage_run(OutputSet& out, const ScenarioConfig& c, const RunResult& r) {
  const auto stem = run_stem(r.summary);
  out.stage(stem + ".csv", metrics_csv(c.topology, r.records));
  out.stage(stem + "_summary.jsonl", summary_json(r.summary));
  out.stage(stem + "_decisions.jsonl", decisions_jsonl(r.decisions));
  out.stage(stem + "_plans.jsonl", plans_jsonl(r.plans));
  if (c.output.plot) {
    for (const auto& ch : charts(c.topology, r.records, stem)) out.stage(stem + "_" + ch.family + ".svg", ch.svg);
  }
}

void print_line(const ScenarioSummary& s) {
  std::printf("%-10s %-11s seed=%-4llu energy=%.4f kWh  pm_spread=%.2f pp  sw_spread=%.2f pp  goodput=%.4f  mos=%.3f\n",
              s.name.c_str(), s.mode.c_str(), static_cast<unsigned long long>(s.seed), s.total_energy_kwh,
              s.mean_pm_spread_pp, s.mean_switch_spread_pp, s.goodput, s.mean_mos);
}

void stage_comparisons(OutputSet& out, const std::vector<RunResult>& results) {
  // Results come in (proposed, traditional) pairs.
  for (std::size_t i = 0; i + 1 < results.size(); i += 2) {
    const auto& a = results[i].summary;
    const auto& b = results[i + 1].summary;
    const auto rep = compare(a, b);
    out.stage(a.name + "_s" + std::to_string(a.seed) + "_comparison.json", comparison_json(rep));
    std::printf("%-10s seed=%-4llu energy reduction %.2f%%, mos delta %+.4f\n", a.name.c_str(),
                static_cast<unsigned long long>(a.seed), rep.energy_reduction_pct, rep.mos_delta);
  }
}

int cmd_run(const CommonOpts& o) {
  const ScenarioConfig base = base_config(o);
  const auto modes = modes_of(o.mode);
  std::vector<ScenarioConfig> configs;
  for (const Mode m : modes) {
    ScenarioConfig c = base;
    c.mode = m;
    configs.push_back(std::move(c));
  }
  const auto results = run_all_parallel(configs, true);
  OutputSet out(base.output.dir);
  for (std::size_t i = 0; i < results.size(); ++i) {
    stage_run(out, configs[i], results[i]);
    print_line(results[i].summary);
  }
  if (modes.size() == 2) stage_comparisons(out, results);
  out.commit();
  return 0;
}

std::string read_first_line(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  std::getline(in, line);
  return line;
}

int cmd_compare(const std::string& a_path, const std::string& b_path, const std::string& out_path) {
  const auto rep = compare(summary_from_json(read_first_line(a_path)), summary_from_json(read_first_line(b_path)));
  const auto text = comparison_json(rep);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    auto p = std::filesystem::path(out_path);
    OutputSet out(p.has_parent_path() ? p.parent_path().string() : ".");
    out.stage(p.filename().string(), text);
    out.commit();
  }
  return 0;
}

std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& s) {
  try {
    const auto dash = s.find('-');
    std::size_t used = 0;
    if (dash == std::string::npos) {
      const auto v = std::stoull(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return {v, v};
    }
    const auto lo = std::stoull(s.substr(0, dash), &used);
    if (used != dash) throw std::invalid_argument(s);
    const auto rest = s.substr(dash + 1);
    const auto hi = std::stoull(rest, &used);
    if (used != rest.size() || hi < lo) throw std::invalid_argument(s);
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw ValidationError("seeds", "expected N or A-B with A <= B, got '" + s + "'");
  }
}

int cmd_sweep(const CommonOpts& o, const std::string& seeds) {
  const ScenarioConfig base = base_config(o);
  const auto [lo, hi] = parse_seed_range(seeds);
  const auto modes = modes_of(o.mode);
  std::vector<std::string> levels;
  if (!o.scenario.empty()) {
    levels.push_back(o.scenario);
  } else if (!o.config.empty()) {
    levels.push_back("");  // keep whatever the file says
  } else {
    levels = preset_names();
  }
  std::vector<ScenarioConfig> configs;
  for (const auto& level : levels) {
    for (std::uint64_t seed = lo; seed <= hi; ++seed) {
      for (const Mode m : modes) {
        ScenarioConfig c = base;
        if (!level.empty()) {
          c.name = level;
          c.traffic.vehicle_count = *preset_vehicle_count(level);
        }
        c.seed = seed;
        c.mode = m;
        configs.push_back(std::move(c));
      }
      if (seed == hi) break;  // hi may be UINT64_MAX
    }
  }
  const auto results = run_all_parallel(configs, true);
  OutputSet out(base.output.dir);
  std::string all;
  for (std::size_t i = 0; i < results.size(); ++i) {
    stage_run(out, configs[i], results[i]);
    all += summary_json(results[i].summary);
    print_line(results[i].summary);
  }
  if (modes.size() == 2) stage_comparisons(out, results);
  out.stage("sweep_summary.jsonl", all);
  out.commit();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vehicular SDN/NFV load-balancing and consolidation simulator"};
  app.require_subcommand(1);

  CommonOpts run_opts;
  auto* run = app.add_subcommand("run", "simulate one scenario");
  add_common(run, run_opts, false);
  run->add_option("--seed", run_opts.seed, "random seed");

  std::string a_path, b_path, cmp_out;
  auto* cmp = app.add_subcommand("compare", "compare two summary files (a = proposed, b = baseline)");
  cmp->add_option("a", a_path, "summary file A")->required();
  cmp->add_option("b", b_path, "summary file B")->required();
  cmp->add_option("--out", cmp_out, "write the report here instead of stdout");

  CommonOpts sweep_opts;
  std::string seeds = "1";
  auto* sweep = app.add_subcommand("sweep", "run presets over a seed range");
  add_common(sweep, sweep_opts, true);
  sweep->add_option("--seeds", seeds, "seed or range, e.g. 1-5")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run) return cmd_run(run_opts);
    if (*cmp) return cmd_compare(a_path, b_path, cmp_out);
    if (*sweep) return cmd_sweep(sweep_opts, seeds);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const MismatchedScenarios& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
