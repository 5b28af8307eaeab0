#include <benchmark/benchmark.h>

#include "lalg/chern_weil.hpp"
#include "lalg/roots.hpp"

using namespace lalg;

static void BM_ChernCharacterAdjoint(benchmark::State& state) {
  auto rep = Representation::adjoint(su2());
  for (auto _ : state) benchmark::DoNotOptimize(char_class(rep.connection(), parse_class("ch"), 3));
}
BENCHMARK(BM_ChernCharacterAdjoint);

static void BM_LGenusLeviCivita(benchmark::State& state) {
  auto a = product(aff1(), aff1());
  FormMatrix R = curvature(levi_civita(a, Metric::identity(4)));
  for (auto _ : state) benchmark::DoNotOptimize(l_genus(R, 4));
}
BENCHMARK(BM_LGenusLeviCivita);

static void BM_RootsIdentity(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(roots_identity(RootsIdentity::signature, static_cast<std::size_t>(state.range(0)), 8));
}
BENCHMARK(BM_RootsIdentity)->Arg(1)->Arg(2)->Arg(3);
