#include <benchmark/benchmark.h>

#include "lalg/groupoid.hpp"
#include "lalg/thom_index.hpp"

using namespace lalg;

static void BM_SphereEulerIndex(benchmark::State& state) {
  auto s = sphere_orthonormal();
  std::vector<std::string> xy = {"x", "y"};
  Density om{s, parse_scalar("4/(1+x^2+y^2)^2", xy)};
  for (auto _ : state) benchmark::DoNotOptimize(index_euler(s, Metric::identity(2), om, Domain::plane()));
}
BENCHMARK(BM_SphereEulerIndex)->Unit(benchmark::kMillisecond);

static void BM_PairGroupoidConvolution(benchmark::State& state) {
  auto n = static_cast<std::size_t>(state.range(0));
  auto G = FiniteGroupoid::pair(n);
  ArrowFunction f(n * n), g(n * n);
  for (std::size_t i = 0; i < n * n; ++i) {
    f[i] = Rational(static_cast<long>(i % 7) - 3);
    g[i] = Rational(static_cast<long>(i % 5) + 1);
  }
  for (auto _ : state) benchmark::DoNotOptimize(convolve(G, f, g));
}
BENCHMARK(BM_PairGroupoidConvolution)->Arg(3)->Arg(6)->Arg(10);
