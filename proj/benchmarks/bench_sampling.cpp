#include <benchmark/benchmark.h>

#include "stabletilt/girsanov.hpp"
#include "stabletilt/stable_process.hpp"

using namespace stabletilt;

static void BM_SampleIncrement(benchmark::State& state) {
  const auto p = StableParams::make(static_cast<int>(state.range(0)), 1.0);
  RngStream g(1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(sample_increment(p, 1.0, g));
}
BENCHMARK(BM_SampleIncrement)->Arg(1)->Arg(3);

static void BM_JumpPathEvents(benchmark::State& state) {
  const auto p = StableParams::make(3, 1.0);
  const double cutoff = 1.0 / static_cast<double>(state.range(0));
  std::uint64_t i = 0;
  for (auto _ : state) {
    PathSim sim(p, Point::zero(3), cutoff, SmallJumpPolicy::Drop, RngStream(2, i++));
    std::size_t events = 0;
    sim.advance_to(10.0, [&](double, const Point&, const Point&) { ++events; });
    benchmark::DoNotOptimize(events);
  }
}
BENCHMARK(BM_JumpPathEvents)->Arg(10)->Arg(100)->Arg(1000);

static void BM_TiltedPath(benchmark::State& state) {
  const auto p = StableParams::make(3, 1.0);
  auto cfg = TiltedPathConfig::make(p, fuchsian_capped_kernel(1.0, 1.0), 1e-2, 10.0);
  std::uint64_t i = 0;
  for (auto _ : state) {
    TiltedPathSim sim(cfg, Point::zero(3), RngStream(3, i++));
    sim.advance_to(10.0);
    benchmark::DoNotOptimize(sim.position());
  }
}
BENCHMARK(BM_TiltedPath);

BENCHMARK_MAIN();
