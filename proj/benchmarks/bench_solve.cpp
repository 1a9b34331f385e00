#include <benchmark/benchmark.h>

#include "cmvlab/bispectral.hpp"

namespace {

using namespace cmvlab;

void BM_diagonal_solve_exact(benchmark::State& state) {
  const int m = int(state.range(0));
  auto alpha = VerblunskySeq<ExactComplex>::constant(ExactComplex(Rational(3, 5)));
  for (auto _ : state) {
    auto sys = assemble_system(alpha, 2, SolvePattern::diagonal(m), 3 * m);
    benchmark::DoNotOptimize(nullspace(sys));
  }
}

void BM_diagonal_solve_float(benchmark::State& state) {
  const int m = int(state.range(0));
  auto alpha = VerblunskySeq<FloatComplex>::constant(FloatComplex(0.6, 0.0));
  for (auto _ : state) {
    auto sys = assemble_system(alpha, 2, SolvePattern::diagonal(m), 3 * m);
    benchmark::DoNotOptimize(nullspace(sys));
  }
}

void BM_olp_recurrence(benchmark::State& state) {
  const int count = int(state.range(0));
  auto alpha = VerblunskySeq<ExactComplex>::constant(ExactComplex(Rational(3, 5)));
  for (auto _ : state) benchmark::DoNotOptimize(compute_olp(alpha, count));
}

}  // namespace

BENCHMARK(BM_diagonal_solve_exact)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_diagonal_solve_float)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_olp_recurrence)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
