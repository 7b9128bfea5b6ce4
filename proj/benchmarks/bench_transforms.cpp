#include <benchmark/benchmark.h>

#include <random>

#include "rieszfeat/fft.hpp"
#include "rieszfeat/representation.hpp"
#include "rieszfeat/riesz.hpp"

namespace {

rieszfeat::ImageGrid noise(std::size_t n) {
  std::mt19937_64 rng(n);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> s(n * n);
  for (auto& v : s) v = u(rng);
  return rieszfeat::ImageGrid(n, n, std::move(s));
}

void BM_Fft2(benchmark::State& state) {
  const auto f = noise(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rieszfeat::fft2(f));
}

void BM_RieszTransform(benchmark::State& state) {
  const auto f = noise(static_cast<std::size_t>(state.range(0)));
  const rieszfeat::MultiplierCache cache;
  for (auto _ : state) benchmark::DoNotOptimize(rieszfeat::riesz_transform(f, {1, 0}, cache));
}

void BM_ExtractFeatures(benchmark::State& state) {
  const auto f = noise(static_cast<std::size_t>(state.range(0)));
  const rieszfeat::MultiplierCache cache;
  const rieszfeat::RieszConfig config;
  for (auto _ : state) benchmark::DoNotOptimize(rieszfeat::extract_features(f, config, cache));
}

}  // namespace

BENCHMARK(BM_Fft2)->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(BM_RieszTransform)->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(BM_ExtractFeatures)->Arg(32)->Arg(64)->Arg(128);

BENCHMARK_MAIN();
