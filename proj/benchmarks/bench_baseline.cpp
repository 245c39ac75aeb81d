#include <benchmark/benchmark.h>

#include "argus/bench.hpp"

namespace {

// Full-label reference on sizes it can finish.
void BM_LabelCorrecting(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto inst = argus::bench::generate_instance(n, n, 2, 1);
  for (auto _ : state) {
    auto r = argus::bench::solve_label_correcting(inst.graph, inst.start, inst.goal, inst.budget(0.2), 60.0);
    benchmark::DoNotOptimize(r.log_risk);
  }
}
BENCHMARK(BM_LabelCorrecting)->Arg(12)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace
