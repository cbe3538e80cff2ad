#include <benchmark/benchmark.h>

#include "potd/ot.hpp"
#include "potd/rng.hpp"

namespace {

potd::Matrix cloud(potd::Rng& rng, potd::Index n, potd::Index p, double shift) {
  potd::Matrix X(n, p);
  for (potd::Index i = 0; i < n; ++i) {
    for (potd::Index j = 0; j < p; ++j) X(i, j) = rng.normal() + shift;
  }
  return X;
}

void BM_ExactAssignment(benchmark::State& state) {
  potd::Rng rng(1);
  const auto n = static_cast<potd::Index>(state.range(0));
  const auto mu = potd::DiscreteMeasure::uniform(cloud(rng, n, 10, 0.0));
  const auto nu = potd::DiscreteMeasure::uniform(cloud(rng, n, 10, 1.0));
  const potd::Matrix C = potd::squared_euclidean_cost(mu.points(), nu.points());
  for (auto _ : state) benchmark::DoNotOptimize(potd::exact_ot(mu, nu, C));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ExactAssignment)->RangeMultiplier(2)->Range(32, 512)->Complexity();

void BM_NetworkSimplex(benchmark::State& state) {
  potd::Rng rng(2);
  const auto n = static_cast<potd::Index>(state.range(0));
  const auto mu = potd::DiscreteMeasure::uniform(cloud(rng, n, 10, 0.0));
  const auto nu = potd::DiscreteMeasure::uniform(cloud(rng, n + n / 2, 10, 1.0));
  const potd::Matrix C = potd::squared_euclidean_cost(mu.points(), nu.points());
  for (auto _ : state) benchmark::DoNotOptimize(potd::network_simplex_ot(mu, nu, C));
}
BENCHMARK(BM_NetworkSimplex)->RangeMultiplier(2)->Range(32, 256);

void BM_Sinkhorn(benchmark::State& state) {
  potd::Rng rng(3);
  const auto n = static_cast<potd::Index>(state.range(0));
  const auto mu = potd::DiscreteMeasure::uniform(cloud(rng, n, 10, 0.0));
  const auto nu = potd::DiscreteMeasure::uniform(cloud(rng, n, 10, 1.0));
  const potd::Matrix C = potd::squared_euclidean_cost(mu.points(), nu.points());
  potd::SolverConfig config;
  config.mode = potd::SolverMode::kSinkhorn;
  for (auto _ : state) benchmark::DoNotOptimize(potd::sinkhorn(mu, nu, C, config));
}
BENCHMARK(BM_Sinkhorn)->RangeMultiplier(2)->Range(32, 512);

}  // namespace
