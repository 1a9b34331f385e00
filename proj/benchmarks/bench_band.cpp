#include <benchmark/benchmark.h>

#include "cmvlab/bispectral.hpp"

namespace {

using namespace cmvlab;

template <class S>
VerblunskySeq<S> bench_alpha() {
  if constexpr (ScalarTraits<S>::exact)
    return VerblunskySeq<S>::constant(ExactComplex(Rational(3, 5)));
  else
    return VerblunskySeq<S>::constant(FloatComplex(0.6, 0.0));
}

template <class S>
void BM_cmv_product(benchmark::State& state) {
  const int w = int(state.range(0));
  auto f = build_factors(bench_alpha<S>(), w);
  for (auto _ : state) benchmark::DoNotOptimize(f.L * f.M);
  state.SetComplexityN(w);
}

template <class S>
void BM_hermitian_ad(benchmark::State& state) {
  const int w = int(state.range(0));
  const int n = int(state.range(1));
  CmvPair<S> pair(bench_alpha<S>(), w);
  auto leb = lebesgue_solution<S>(w);
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_ad(pair, leb, n));
}

}  // namespace

BENCHMARK_TEMPLATE(BM_cmv_product, cmvlab::ExactComplex)
    ->RangeMultiplier(2)
    ->Range(32, 256)
    ->Complexity();
BENCHMARK_TEMPLATE(BM_cmv_product, cmvlab::FloatComplex)
    ->RangeMultiplier(2)
    ->Range(32, 256)
    ->Complexity();
BENCHMARK_TEMPLATE(BM_hermitian_ad, cmvlab::ExactComplex)
    ->Args({64, 1})
    ->Args({64, 2})
    ->Args({64, 4})
    ->Args({128, 2});
BENCHMARK_TEMPLATE(BM_hermitian_ad, cmvlab::FloatComplex)
    ->Args({64, 2})
    ->Args({128, 4});
