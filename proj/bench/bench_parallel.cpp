// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "phidiv/limitlaw.hpp"
#include "phidiv/montecarlo.hpp"

using namespace phidiv;

namespace {

ExperimentConfig bench_config() {
  ExperimentConfig c;
  c.model = ModelKind::vasicek;
  c.generating_models = {{"VAS0", mean_reverting_theta(0.85837, 0.089102, 0.0021854)},
                         {"VAS1", mean_reverting_theta(3.43348, 0.089102, 0.0087416)}};
  c.null_theta = mean_reverting_theta(0.85837, 0.089102, 0.0021854);
  c.families = {"log", "alpha:-0.5", "power:-1.5"};
  c.n = {50, 100};
  c.delta = {0.1};
  c.m = 64;
  c.master_seed = 11;
  return c;
}

void BM_ExperimentSerial(benchmark::State& state) {
  const ExperimentConfig c = bench_config();
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment_serial(c));
}

void BM_ExperimentParallel(benchmark::State& state) {
  const ExperimentConfig c = bench_config();
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment(c, workers));
}

void BM_Chi2Serial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(draw_chi2_serial(3, 1 << 20, 5));
}

void BM_Chi2Parallel(benchmark::State& state) {
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(draw_chi2_parallel(3, 1 << 20, 5, workers));
}

}  // namespace

BENCHMARK(BM_ExperimentSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExperimentParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Chi2Serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Chi2Parallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
