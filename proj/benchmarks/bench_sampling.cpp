#include <benchmark/benchmark.h>

#include "hgut/oracle.hpp"

namespace {

void ProductOracleSampling(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const hgut::GridShape shape(std::vector<int>(static_cast<std::size_t>(n), 2));
  auto oracle = hgut::make_oracle(hgut::Distribution::uniform(shape), 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle->sample_all_stars());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(ProductOracleSampling)->Arg(16)->Arg(64)->Arg(256);

void ProjectedStream(benchmark::State& state) {
  const hgut::GridShape shape(std::vector<int>(16, 3));
  auto oracle = hgut::make_oracle(hgut::Distribution::uniform(shape), 5);
  hgut::ProjectedSampleStream stream(*oracle, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(stream.next());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(ProjectedStream)->Arg(0);

}  // namespace
