#include <benchmark/benchmark.h>

#include "mstrend/gauss_quantile.hpp"
#include "mstrend/inference.hpp"
#include "mstrend/lrv.hpp"
#include "mstrend/multiscale.hpp"
#include "mstrend/simulate.hpp"
#include "mstrend/sizer.hpp"

using namespace mstrend;

namespace {

void BM_WeightTable(benchmark::State& state) {
  const auto grid = LocationScaleGrid::default_grid(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_weight_table(grid));
}
BENCHMARK(BM_WeightTable)->Arg(250)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_Statistic(benchmark::State& state) {
  const auto T = static_cast<std::size_t>(state.range(0));
  const auto table = build_weight_table(LocationScaleGrid::default_grid(T));
  const auto y = gen_series(T, TrendSpec{}, NoiseSpec::parse("ar1:0.25"), 1).y;
  for (auto _ : state) benchmark::DoNotOptimize(multiscale_statistic(y, table, 1.0));
}
BENCHMARK(BM_Statistic)->Arg(250)->Arg(500)->Unit(benchmark::kMicrosecond);

void BM_CriticalValues(benchmark::State& state) {
  const auto table = build_weight_table(LocationScaleGrid::default_grid(500));
  const QuantileConfig cfg{.n_sims = static_cast<std::size_t>(state.range(0)), .seed = 1};
  for (auto _ : state) benchmark::DoNotOptimize(simulate_critical_values(table, cfg));
}
BENCHMARK(BM_CriticalValues)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_AveragedArFit(benchmark::State& state) {
  const auto y = gen_series(500, TrendSpec::parse("linear:1"), NoiseSpec::parse("ar2:0.167:0.178:0.322"), 1).y;
  const auto p = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(averaged_ar_fit(y, p));
}
BENCHMARK(BM_AveragedArFit)->Arg(1)->Arg(2)->Unit(benchmark::kMicrosecond);

void BM_SizerPlan(benchmark::State& state) {
  const std::size_t T = 500;
  const SizerConfig cfg{.gamma = NoiseSpec::parse("ar1:0.25").autocovariance(T),
                        .grid = LocationScaleGrid::default_grid(T)};
  for (auto _ : state) benchmark::DoNotOptimize(SizerPlan(cfg));
}
BENCHMARK(BM_SizerPlan)->Unit(benchmark::kMillisecond);

void BM_SizerEvaluate(benchmark::State& state) {
  const std::size_t T = 500;
  const auto noise = NoiseSpec::parse("ar1:0.25");
  const SizerPlan plan(SizerConfig{.gamma = noise.autocovariance(T), .grid = LocationScaleGrid::default_grid(T)});
  const auto y = gen_series(T, TrendSpec{}, noise, 1).y;
  for (auto _ : state) benchmark::DoNotOptimize(plan.evaluate(y));
}
BENCHMARK(BM_SizerEvaluate)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
