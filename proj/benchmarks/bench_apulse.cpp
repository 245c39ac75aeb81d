#include <benchmark/benchmark.h>

#include "argus/apulse.hpp"
#include "argus/bench.hpp"

namespace {

void BM_Solve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const double slack = static_cast<double>(state.range(1)) / 100.0;
  const auto inst = argus::bench::generate_instance(n, n, std::max(2, n * n / 400), 1);
  const auto h = argus::precompute_heuristics(inst.graph, inst.goal);
  std::uint64_t expanded = 0;
  for (auto _ : state) {
    auto r = argus::solve(inst.graph, inst.start, inst.goal, inst.budget(slack), {}, &h);
    expanded = r.stats.labels_expanded;
    benchmark::DoNotOptimize(r.total_log_risk);
  }
  state.counters["expanded"] = static_cast<double>(expanded);
}
BENCHMARK(BM_Solve)->ArgsProduct({{16, 32, 64}, {10, 50}})->Unit(benchmark::kMillisecond);

void BM_Heuristics(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto inst = argus::bench::generate_instance(n, n, 4, 1);
  for (auto _ : state) benchmark::DoNotOptimize(argus::precompute_heuristics(inst.graph, inst.goal));
}
BENCHMARK(BM_Heuristics)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace
