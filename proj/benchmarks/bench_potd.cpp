#include <benchmark/benchmark.h>

#include "potd/baselines.hpp"
#include "potd/potd.hpp"
#include "potd/synthetic.hpp"

namespace {

potd::LabeledDataset model_two(potd::Index n, potd::Index p) {
  potd::SyntheticSpec spec;
  spec.model = potd::SyntheticModel::kII;
  spec.n = n;
  spec.p = p;
  return potd::generate(spec).data;
}

void BM_PotdFit(benchmark::State& state) {
  const auto data = model_two(state.range(0), state.range(1));
  potd::SolverConfig solver;
  solver.mode = potd::SolverMode::kExact;
  for (auto _ : state) benchmark::DoNotOptimize(potd::potd_fit(data, 2, solver));
}
BENCHMARK(BM_PotdFit)->Args({400, 10})->Args({400, 30})->Args({1600, 10});

void BM_PotdFitSinkhorn(benchmark::State& state) {
  const auto data = model_two(state.range(0), 10);
  potd::SolverConfig solver;
  solver.mode = potd::SolverMode::kSinkhorn;
  for (auto _ : state) benchmark::DoNotOptimize(potd::potd_fit(data, 2, solver));
}
BENCHMARK(BM_PotdFitSinkhorn)->Arg(400)->Arg(1600);

void BM_Baselines(benchmark::State& state) {
  const auto data = model_two(400, 30);
  for (auto _ : state) {
    benchmark::DoNotOptimize(potd::sir_fit(data, 1));
    benchmark::DoNotOptimize(potd::save_fit(data, 2));
    benchmark::DoNotOptimize(potd::pca_fit(data.X, 2));
  }
}
BENCHMARK(BM_Baselines);

}  // namespace
