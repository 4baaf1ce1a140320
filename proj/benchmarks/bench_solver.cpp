#include <benchmark/benchmark.h>

#include "patholab/nonuniqueness.hpp"

namespace {

void SolveBoundedBranch(benchmark::State& state) {
  patholab::RadialBVP bvp;
  bvp.params = patholab::make_w11(2, 2.0);
  bvp.intervals = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(patholab::solve_bounded_branch(bvp));
}
BENCHMARK(SolveBoundedBranch)->Arg(10000)->Arg(40000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
