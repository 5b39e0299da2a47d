// OpenMP grid kernel against the serial reference.

#include <benchmark/benchmark.h>

#include "loopmorph/frame.hpp"

using namespace loopmorph;

namespace {

void run(benchmark::State& state, bool parallel) {
  const auto P = state.range(0) == 0 ? catalog_potential(CatalogName::CYLINDER)
                                     : catalog_potential(CatalogName::SMYTH, {{"m", 1}});
  const auto g = GridSpec::square(GridMode::PARA, 1, static_cast<int>(state.range(1)), 1.0);
  for (auto _ : state) {
    auto F = parallel ? build_frame_grid(P, g) : build_frame_grid_serial(P, g);
    benchmark::DoNotOptimize(F.loops.data());
  }
  state.counters["nodes"] = static_cast<double>(g.node_count());
}

void BM_FrameGridParallel(benchmark::State& s) { run(s, true); }
void BM_FrameGridSerial(benchmark::State& s) { run(s, false); }

}  // namespace

// args: potential (0 cylinder, 1 smyth m = 1), nodes per axis
BENCHMARK(BM_FrameGridParallel)->Args({0, 21})->Args({1, 21})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_FrameGridSerial)->Args({0, 21})->Args({1, 21})->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
