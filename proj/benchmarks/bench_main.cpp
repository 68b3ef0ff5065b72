#include <benchmark/benchmark.h>

#include <memory>

#include "fominlab/kernel.hpp"
#include "fominlab/loewner.hpp"
#include "fominlab/walks.hpp"

using namespace fominlab;

// Poisson kernel towards one boundary point on the delta-scaled disk.
static void BM_PoissonKernel(benchmark::State& state) {
  const double delta = 1.0 / static_cast<double>(state.range(0));
  auto dom = std::make_shared<const LatticeDomain>(build_scaled_disk(delta));
  const Point y = mark_nearest_boundary(*dom, delta, 0.0);
  for (auto _ : state) {
    KernelSolver solver(dom);
    benchmark::DoNotOptimize(solver.poisson_kernel(y));
  }
  state.counters["unknowns"] = static_cast<double>(dom->interior_size());
}
BENCHMARK(BM_PoissonKernel)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_ExcursionAndLoopErase(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const LatticeDomain dom = build_rectangle(side, side);
  Engine rng = make_stream(1, 0);
  LoopEraser erase;
  std::size_t steps = 0;
  for (auto _ : state) {
    const LatticePath p = sample_excursion(dom, {-1, side / 2}, rng);
    steps += p.length();
    benchmark::DoNotOptimize(erase(p.vertices));
  }
  state.counters["steps"] = benchmark::Counter(static_cast<double>(steps), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_ExcursionAndLoopErase)->Arg(6)->Arg(20)->Arg(60);

static void BM_ConditionedWalk(benchmark::State& state) {
  auto dom = std::make_shared<const LatticeDomain>(build_half_disk(320.0, 1.0 / 40.0));
  KernelSolver solver(dom);
  const ConditionedWalk walk(*dom, *solver.poisson_kernel({40, 0}));
  Engine rng = make_stream(2, 0);
  for (auto _ : state) benchmark::DoNotOptimize(walk.sample({20, 0}, rng));
}
BENCHMARK(BM_ConditionedWalk)->Unit(benchmark::kMicrosecond);

// Full kappa = 2 trace, fast blocked zipper against exact composition.
static void BM_ZipperTrace(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  ZipperOptions opt;
  opt.fast = state.range(1) != 0;
  for (auto _ : state) {
    Engine rng = make_stream(3, 0);
    benchmark::DoNotOptimize(sle_trace(2.0, n, 1e-4, rng, Parametrization::Standard, opt));
  }
  state.SetComplexityN(static_cast<benchmark::IterationCount>(n));
}
BENCHMARK(BM_ZipperTrace)
    ->Args({2000, 0})
    ->Args({8000, 0})
    ->Args({2000, 1})
    ->Args({8000, 1})
    ->Args({32000, 1})
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
