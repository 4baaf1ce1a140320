#include <benchmark/benchmark.h>

#include "patholab/coefficients.hpp"
#include "patholab/families.hpp"

namespace {

void EvalProfileW11(benchmark::State& state) {
  const auto params = patholab::make_w11(3, 2.0);
  double r = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(patholab::eval_profile(params, r));
    r = r < 0.9 ? r + 1e-6 : 0.3;
  }
}
BENCHMARK(EvalProfileW11);

void AssembleCoefficientMatrix(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  patholab::VecN x = patholab::VecN::Constant(n, 0.3);
  for (auto _ : state)
    benchmark::DoNotOptimize(patholab::assemble_A(x, -0.25));
}
BENCHMARK(AssembleCoefficientMatrix)->Arg(2)->Arg(3)->Arg(8);

void ChooseR0(benchmark::State& state) {
  auto params = patholab::make_w11(2, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(patholab::choose_r0(params, 0.5));
}
BENCHMARK(ChooseR0);

}  // namespace

BENCHMARK_MAIN();
