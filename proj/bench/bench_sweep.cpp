#include <array>
#include <cstdint>
#include <numeric>
#include <vector>

#include <benchmark/benchmark.h>
#include <omp.h>

#include "accsim/sweep.hpp"

namespace {

std::vector<accsim::sweep::SweepPoint> grid(int n_seeds) {
  const std::array<double, 3> ego{40, 60, 90};
  const std::array<double, 2> spoof{5, 10};
  const std::array<bool, 2> ids{false, true};
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(n_seeds));
  std::iota(seeds.begin(), seeds.end(), 0);
  return accsim::sweep::make_grid(ego, spoof, ids, seeds);
}

void BM_SweepSerial(benchmark::State& state) {
  const auto points = grid(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(accsim::sweep::run_serial(points));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(points.size()));
}

void BM_SweepParallel(benchmark::State& state) {
  const auto points = grid(static_cast<int>(state.range(0)));
  omp_set_num_threads(static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(accsim::sweep::run_parallel(points));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(points.size()));
}

}  // namespace

BENCHMARK(BM_SweepSerial)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepParallel)
    ->ArgsProduct({{4, 16}, {1, 2, 4, 8}})
    ->ArgNames({"seeds", "threads"})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

BENCHMARK_MAIN();
