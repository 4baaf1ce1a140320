#include <benchmark/benchmark.h>

#include "patholab/norms.hpp"
#include "patholab/weak_form.hpp"

namespace {

void AnnulusFunctionalLp(benchmark::State& state) {
  const auto params = patholab::make_w11(static_cast<int>(state.range(0)), 2.0);
  const auto f = patholab::Functional::lp(1.05);
  int j = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(patholab::annulus_functional(params, f, j));
    j = j % 48 + 1;
  }
}
BENCHMARK(AnnulusFunctionalLp)->Arg(2)->Arg(3);

void IbpCheckW11(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto params = patholab::make_w11(n, 2.0);
  patholab::VecN c = patholab::VecN::Zero(n);
  c(0) = 0.15;
  const patholab::BumpTestFunction phi(c, 0.6);
  for (auto _ : state)
    benchmark::DoNotOptimize(patholab::ibp_check(phi, params, 1.0 / 256.0));
}
BENCHMARK(IbpCheckW11)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BoundaryTerm(benchmark::State& state) {
  const auto params = patholab::make_w11(2, 2.0);
  patholab::VecN c = patholab::VecN::Zero(2);
  c(0) = 0.15;
  const patholab::BumpTestFunction phi(c, 0.6);
  for (auto _ : state)
    benchmark::DoNotOptimize(patholab::boundary_term(phi, params, 1.0 / 1024.0));
}
BENCHMARK(BoundaryTerm);

}  // namespace

BENCHMARK_MAIN();
