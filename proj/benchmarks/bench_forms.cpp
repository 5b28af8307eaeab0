#include <benchmark/benchmark.h>

#include "lalg/cohomology.hpp"
#include "lalg/form.hpp"

using namespace lalg;

static void BM_DifferentialSu2Basis(benchmark::State& state) {
  auto g = su2();
  std::vector<AlgForm> forms;
  for (std::size_t k = 0; k <= 3; ++k)
    for (auto& b : form_basis(g, k)) forms.push_back(b);
  for (auto _ : state)
    for (const auto& w : forms) benchmark::DoNotOptimize(d(w));
}
BENCHMARK(BM_DifferentialSu2Basis);

static void BM_DifferentialChartForm(benchmark::State& state) {
  auto t = tangent(static_cast<std::size_t>(state.range(0)));
  std::size_t n = t->base_dim();
  Scalar f(1);
  for (std::size_t i = 0; i < n; ++i) f = f * (Scalar::variable(n, i) + Scalar(static_cast<long>(i + 2)));
  AlgForm w = AlgForm::basis(t, {0}, f);
  for (auto _ : state) benchmark::DoNotOptimize(d(w));
}
BENCHMARK(BM_DifferentialChartForm)->Arg(2)->Arg(3)->Arg(4);

static void BM_BettiNumbers(benchmark::State& state) {
  auto g = product(su2(), abelian_bundle(0, static_cast<std::size_t>(state.range(0))));
  auto rep = Representation::trivial(g);
  for (auto _ : state) benchmark::DoNotOptimize(betti_numbers(rep));
}
BENCHMARK(BM_BettiNumbers)->Arg(1)->Arg(3)->Arg(5);
