#include <benchmark/benchmark.h>

#include "hgut/distribution.hpp"
#include "hgut/edge_graphs.hpp"
#include "hgut/rng.hpp"

namespace {

void BuildOrientation(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const hgut::GridShape shape({side, side, side});
  hgut::Rng rng(3);
  const auto dist = hgut::Distribution::dense(
      shape, rng.dirichlet(0.7, static_cast<std::size_t>(shape.total_size())));
  for (auto _ : state) {
    auto g = hgut::graphs::build_orientation(dist);
    benchmark::DoNotOptimize(g);
  }
  state.SetComplexityN(shape.total_size());
}
BENCHMARK(BuildOrientation)->Arg(3)->Arg(5)->Arg(8)->Arg(12)->Complexity();

}  // namespace
