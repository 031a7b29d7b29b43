#include <benchmark/benchmark.h>

#include "kmace/ace.hpp"
#include "kmace/datagen.hpp"
#include "kmace/kernel.hpp"
#include "kmace/kmeans.hpp"
#include "kmace/linalg.hpp"

namespace {

using namespace kmace;

Dataset make_data(const std::string& name) {
  return sample_mixture(scenario(name, RngSpec{1, "bench"}));
}

void BM_KMeansS1(benchmark::State& state) {
  const Dataset data = make_data("s1");
  const int m = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const Partition p = kmeans(data, m, RngSpec{seed++, "kmeans"});
    benchmark::DoNotOptimize(p.compactness_total);
  }
}
BENCHMARK(BM_KMeansS1)->Arg(3)->Arg(9)->Arg(15);

void BM_SelectCncS1(benchmark::State& state) {
  const Dataset data = make_data("s1");
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const SelectionReport r = select_cnc(data, 2, 12, 5.0, 5.0, RngSpec{seed++, "sel"});
    benchmark::DoNotOptimize(r.m_hat);
  }
}
BENCHMARK(BM_SelectCncS1)->Unit(benchmark::kMillisecond);

void BM_Gram(benchmark::State& state) {
  const Dataset data = make_data("s1");
  for (auto _ : state) {
    const GramMatrix g = gram(data, 2.0);
    benchmark::DoNotOptimize(g.values.data());
  }
}
BENCHMARK(BM_Gram)->Unit(benchmark::kMillisecond);

void BM_KernelKMeans(benchmark::State& state) {
  const Dataset data = make_data("s1");
  const GramMatrix g = gram(data, 2.0);
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const Partition p = kernel_kmeans(data, g, m, RngSpec{});
    benchmark::DoNotOptimize(p.compactness_total);
  }
}
BENCHMARK(BM_KernelKMeans)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_FeatureSpectrum(benchmark::State& state) {
  const Dataset data = make_data("s1");
  const GramMatrix g = gram(data, 2.0);
  const Partition p = kernel_kmeans(data, g, static_cast<int>(state.range(0)), RngSpec{});
  for (auto _ : state) {
    const auto fm = feature_space_moments(g, p);
    benchmark::DoNotOptimize(fm.size());
  }
}
BENCHMARK(BM_FeatureSpectrum)->Arg(3)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_JacobiEigen(benchmark::State& state) {
  const std::size_t d = static_cast<std::size_t>(state.range(0));
  Rng rng(RngSpec{3, "eig"});
  Matrix g(d, d);
  for (double& v : g.storage()) v = rng.normal();
  Matrix a(d, d, 0.0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k) a(i, j) += g(i, k) * g(j, k);
  for (auto _ : state) {
    const SymSpectrum s = sym_eigenvalues(a);
    benchmark::DoNotOptimize(s.eigenvalues.data());
  }
}
BENCHMARK(BM_JacobiEigen)->Arg(4)->Arg(16)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
