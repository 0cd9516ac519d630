#include <benchmark/benchmark.h>

#include <numeric>
#include <random>

#include "nefb/boosting.hpp"
#include "nefb/hamming_tree.hpp"
#include "nefb/stump.hpp"

namespace {

struct Problem {
  nefb::Matrix x;
  nefb::LabelCode y;
  nefb::Matrix w;
};

Problem make_problem(std::size_t n, std::size_t d, int k) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> label(1, k);
  Problem p;
  p.x = nefb::Matrix(n, d);
  for (double& v : p.x.data()) v = normal(rng);
  std::vector<int> labels(n);
  for (int& l : labels) l = label(rng);
  p.y = nefb::LabelCode::one_hot(labels, k);
  p.w = nefb::init_weights(p.y);
  return p;
}

// args: n, d, K
void BM_StumpSearch(benchmark::State& state) {
  const auto p = make_problem(state.range(0), state.range(1), static_cast<int>(state.range(2)));
  const nefb::DenseFeatures space(p.x);
  nefb::StumpSearch search(space, p.y.classes());
  const auto codes = nefb::weighted_codes(p.w, p.y);
  std::vector<std::uint32_t> members(p.x.rows());
  std::iota(members.begin(), members.end(), 0u);
  const nefb::NodeMembers root{members, {}, 0, true};
  std::vector<nefb::FeatureId> all(p.x.cols());
  std::iota(all.begin(), all.end(), nefb::FeatureId{0});
  for (auto _ : state) benchmark::DoNotOptimize(search.best(root, codes, all).edge);
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1));
}
BENCHMARK(BM_StumpSearch)->Args({7494, 16, 10})->Args({10000, 100, 10})->Args({2000, 50, 26})->Args({2000, 50, 40});

// args: n, d, leaves
void BM_TreeGrowth(benchmark::State& state) {
  const auto p = make_problem(state.range(0), state.range(1), 10);
  const nefb::DenseFeatures space(p.x);
  const auto codes = nefb::weighted_codes(p.w, p.y);
  const nefb::TreeConfig config{static_cast<std::size_t>(state.range(2)), 0};
  for (auto _ : state) {
    nefb::Rng rng(1);
    benchmark::DoNotOptimize(nefb::learn_tree(space, codes, 10, config, rng).edge);
  }
}
BENCHMARK(BM_TreeGrowth)->Args({7494, 16, 4})->Args({7494, 100, 4})->Args({10000, 100, 8});

}  // namespace
