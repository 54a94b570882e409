#include <benchmark/benchmark.h>

#include "subspace/probe.hpp"
#include "subspace/projection.hpp"
#include "subspace/rng.hpp"
#include "subspace/synth.hpp"

using namespace subspace;

static void BM_SampleJl(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_jl(++seed, 768, k));
}
BENCHMARK(BM_SampleJl)->Arg(64)->Arg(256)->Arg(512);

static void BM_Project(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  SeededRng rng(1);
  const Matrix x = gaussian_matrix(rng, 1000, 768);
  const ProjectionMatrix p = sample_jl(2, 768, k);
  for (auto _ : state) benchmark::DoNotOptimize(project(p, x));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_Project)->Arg(64)->Arg(256);

static void BM_FitPca(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  SeededRng rng(3);
  const Matrix x = gaussian_matrix(rng, 2000, d);
  for (auto _ : state) benchmark::DoNotOptimize(fit_pca(x, 32));
}
BENCHMARK(BM_FitPca)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_FitPcaPowerIteration(benchmark::State& state) {
  SeededRng rng(3);
  const Matrix x = gaussian_matrix(rng, 2000, 128);
  for (auto _ : state) benchmark::DoNotOptimize(fit_pca(x, 8, PcaSolver::kPowerIteration));
}
BENCHMARK(BM_FitPcaPowerIteration)->Unit(benchmark::kMillisecond);

static void BM_TrainProbe(benchmark::State& state) {
  CollapseSpec spec;
  const CollapseData data = generate_collapse_dataset(spec);
  TrainConfig cfg;
  cfg.epochs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(train_probe(data.train, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(data.train.size()));
}
BENCHMARK(BM_TrainProbe)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
