#include <benchmark/benchmark.h>

#include "stabletilt/functionals.hpp"
#include "stabletilt/kernels.hpp"

using namespace stabletilt;

static void BM_Accumulate(benchmark::State& state) {
  const auto p = StableParams::make(1, 0.5);
  const auto F = fuchsian_capped_kernel(1.0, 1.0);
  QuadratureSpec q;
  auto h = RadialField::build(p, F, q, PairTransform::Identity, 1e-3);
  auto path = sample_jump_path(p, Point::zero(1), static_cast<double>(state.range(0)), 1e-3,
                               SmallJumpPolicy::Drop, 1, 0);
  for (auto _ : state)
    benchmark::DoNotOptimize(accumulate(path, F, [&](const Point& x) { return h(x); }));
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                          static_cast<int64_t>(path.events.size()));
}
BENCHMARK(BM_Accumulate)->Arg(1)->Arg(10)->Arg(100);

static void BM_RadialFieldEval(benchmark::State& state) {
  const auto p = StableParams::make(1, 0.5);
  const auto F = fuchsian_capped_kernel(1.0, 1.0);
  QuadratureSpec q;
  auto h = RadialField::build(p, F, q, PairTransform::Identity, 1e-3);
  double r = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(h(r));
    r = r < 100.0 ? r + 0.1 : 0.0;
  }
}
BENCHMARK(BM_RadialFieldEval);
