#include <benchmark/benchmark.h>

#include "hgut/fourier.hpp"
#include "hgut/rng.hpp"

namespace {

void TransformRoundTrip(benchmark::State& state) {
  const hgut::GridShape shape({static_cast<int>(state.range(0)), 3, 2});
  hgut::Rng rng(7);
  const auto f = hgut::fourier::ComplexField::random(shape, rng, false);
  for (auto _ : state) {
    auto coeffs = hgut::fourier::dft(f);
    auto back = hgut::fourier::idft(coeffs);
    benchmark::DoNotOptimize(back);
  }
  state.SetComplexityN(shape.total_size());
}
BENCHMARK(TransformRoundTrip)->Arg(3)->Arg(5)->Arg(9)->Complexity();

void NoiseOperatorSpectral(benchmark::State& state) {
  const hgut::GridShape shape({4, 4, static_cast<int>(state.range(0))});
  hgut::Rng rng(11);
  const auto f = hgut::fourier::ComplexField::random(shape, rng, true);
  for (auto _ : state) {
    auto out = hgut::fourier::noise_operator_spectral(f, 0.6);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(NoiseOperatorSpectral)->Arg(2)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
