#include <benchmark/benchmark.h>

#include <random>

#include "nefb/haar.hpp"

namespace {

void BM_HaarEval(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> pixel(0, 255);
  std::vector<double> img(28 * 28);
  for (double& v : img) v = pixel(rng);
  const nefb::ImageGeometry g{28, 28, 1};
  const auto channels = nefb::integral_images(img, g);
  std::vector<nefb::HaarFilter> filters(1024);
  for (auto& f : filters) f = nefb::sample_haar_filter(rng, g);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(nefb::eval_haar(channels, filters[i++ & 1023]));
}
BENCHMARK(BM_HaarEval);

void BM_IntegralImage(benchmark::State& state) {
  std::vector<double> img(32 * 32 * 3, 1.0);
  const nefb::ImageGeometry g{32, 32, 3};
  for (auto _ : state) benchmark::DoNotOptimize(nefb::integral_images(img, g).size());
}
BENCHMARK(BM_IntegralImage);

}  // namespace
