#include <benchmark/benchmark.h>

#include <random>

#include "nefb/correlation.hpp"
#include "nefb/parallel.hpp"

namespace {

// args: rows, columns, workers
void BM_CorrelationMatrix(benchmark::State& state) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  nefb::Matrix x(state.range(0), state.range(1));
  for (double& v : x.data()) v = normal(rng);
  nefb::set_worker_count(state.range(2));
  for (auto _ : state) benchmark::DoNotOptimize(nefb::correlation_matrix(x)(0, 1));
  nefb::set_worker_count(1);
  const auto d = state.range(1);
  state.SetItemsProcessed(state.iterations() * d * (d - 1) / 2);
}
BENCHMARK(BM_CorrelationMatrix)->Args({1000, 326, 1})->Args({1000, 326, 4})->Args({1000, 784, 1});

}  // namespace
