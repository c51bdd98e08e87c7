// Serial reference vs OpenMP batch over the ten preset runs.
#include <benchmark/benchmark.h>
#include <omp.h>

#include "sdiov/batch.hpp"

namespace {

std::vector<sdiov::ScenarioConfig> configs(double duration) {
  sdiov::ScenarioConfig base;
  base.duration_s = duration;
  return sdiov::sweep_configs(base);
}

void BM_Serial(benchmark::State& state) {
  const auto cs = configs(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sdiov::run_batch_serial(cs));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(cs.size()));
}

void BM_Parallel(benchmark::State& state) {
  const auto cs = configs(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sdiov::run_batch_parallel(cs));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(cs.size()));
  state.counters["threads"] = omp_get_max_threads();
}

void BM_SingleRun(benchmark::State& state) {
  sdiov::ScenarioConfig c;
  c.traffic.vehicle_count = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sdiov::run_scenario(c, false));
}

}  // namespace

BENCHMARK(BM_Serial)->Arg(120)->Arg(600)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Parallel)->Arg(120)->Arg(600)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SingleRun)->Arg(300)->Arg(1500)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
