// Parallel kernels against their serial references.
#include <benchmark/benchmark.h>

#include "bincat/comparator.hpp"
#include "bincat/simulator.hpp"

using namespace bincat;

namespace {

const GridAxis kLambda{0.05, 10, 40};
const GridAxis kP{0.005, 0.995, 40};

void BM_ScanSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(scan_region_serial(kLambda, kP, Topology::tree(2)));
  state.SetItemsProcessed(state.iterations() * kLambda.steps * kP.steps);
}

void BM_ScanParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(scan_region(kLambda, kP, Topology::tree(2)));
  state.SetItemsProcessed(state.iterations() * kLambda.steps * kP.steps);
}

SimConfig sim_config() {
  SimConfig c{ModelParams(Rational(1, 2), Rational(1, 2)), Topology::tree(2)};
  c.replicates = 20000;
  c.seed = 1;
  return c;
}

void BM_ReplicatesSerial(benchmark::State& state) {
  const auto c = sim_config();
  for (auto _ : state) benchmark::DoNotOptimize(run_replicates_serial(c));
  state.SetItemsProcessed(state.iterations() * c.replicates);
}

void BM_ReplicatesParallel(benchmark::State& state) {
  const auto c = sim_config();
  for (auto _ : state) benchmark::DoNotOptimize(run_replicates(c));
  state.SetItemsProcessed(state.iterations() * c.replicates);
}

}  // namespace

BENCHMARK(BM_ScanSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScanParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ReplicatesSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReplicatesParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
