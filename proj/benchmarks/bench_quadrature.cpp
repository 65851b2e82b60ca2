#include <benchmark/benchmark.h>

#include "stabletilt/kernels.hpp"
#include "stabletilt/potential.hpp"

using namespace stabletilt;

static void BM_HField(benchmark::State& state) {
  const auto p = StableParams::make(3, 1.0);
  const auto F = fuchsian_capped_kernel(1.0, 1.5);
  QuadratureSpec q;
  Point x = Point::unit(3, 0);
  x *= 2.0;
  for (auto _ : state) benchmark::DoNotOptimize(h_field(p, F, x, q));
}
BENCHMARK(BM_HField);

static void BM_RadialFieldBuild(benchmark::State& state) {
  const auto p = StableParams::make(3, 1.0);
  const auto F = fuchsian_capped_kernel(1.0, 1.5);
  QuadratureSpec q;
  for (auto _ : state)
    benchmark::DoNotOptimize(RadialField::build(p, F, q, PairTransform::Identity, 1e-3));
}
BENCHMARK(BM_RadialFieldBuild);

static void BM_BallGreenEval(benchmark::State& state) {
  const auto p = StableParams::make(3, 1.0);
  UnitBallGreen gb(p);
  Point x = Point::zero(3), y = Point::unit(3, 0);
  y *= 0.4;
  for (auto _ : state) benchmark::DoNotOptimize(gb(x, y));
}
BENCHMARK(BM_BallGreenEval);

static void BM_ThreeG(benchmark::State& state) {
  const auto p = StableParams::make(3, 1.0);
  UnitBallGreen gb(p);
  Point x = Point::zero(3), w = Point::zero(3);
  x[0] = 0.5;
  w[0] = -0.3;
  for (auto _ : state)
    benchmark::DoNotOptimize(three_g_integral(gb, x, w, 1.5, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_ThreeG)->Arg(0)->Unit(benchmark::kMillisecond);
