#include <benchmark/benchmark.h>

#include "argus/planner.hpp"
#include "argus/risk.hpp"

namespace {

argus::Scenario make_scenario(int n, int threats) {
  std::vector<argus::ThreatSpec> ts;
  for (int i = 0; i < threats; ++i) {
    const argus::Cell at{(i * 37) % n, (i * 61 + 5) % n};
    ts.push_back(argus::ThreatSpec::dirac("T" + std::to_string(i), at, {250.0, 0.3, 2.0}));
  }
  return argus::Scenario::create(argus::TerrainGrid::flat(n, n), argus::MobilityModel::defaults(), std::move(ts));
}

void BM_RiskField(benchmark::State& state) {
  const auto sc = make_scenario(static_cast<int>(state.range(0)), 4);
  const double width = static_cast<double>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(sc.risk_field(width));
}
BENCHMARK(BM_RiskField)->ArgsProduct({{64, 128, 256}, {0, 50}})->Unit(benchmark::kMillisecond);

void BM_Detection(benchmark::State& state) {
  const argus::DetectionParams p{300.0, 0.25, 1.5};
  double d = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(argus::detection_probability(p, d));
    d = d > 400.0 ? 0.0 : d + 0.37;
  }
}
BENCHMARK(BM_Detection);

}  // namespace
