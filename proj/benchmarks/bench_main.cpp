#include <benchmark/benchmark.h>

#include "geobst/arboreal.hpp"
#include "geobst/greedy.hpp"
#include "geobst/patterns.hpp"
#include "geobst/sequences.hpp"

using namespace geobst;

namespace {

void BM_GreedyRandomPermutation(benchmark::State& state) {
  const auto s = random_permutation_access(static_cast<Key>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(greedy_execute(s).cost);
  state.SetItemsProcessed(state.iterations() * s.length());
}
BENCHMARK(BM_GreedyRandomPermutation)->RangeMultiplier(4)->Range(256, 16384);

void BM_GreedyDeque(benchmark::State& state) {
  const bool restricted = state.range(1) != 0;
  const auto s = gen_deque(1000, static_cast<Time>(state.range(0)), 7, restricted);
  for (auto _ : state) benchmark::DoNotOptimize(greedy_execute(s).cost);
  state.SetItemsProcessed(state.iterations() * s.length());
}
BENCHMARK(BM_GreedyDeque)->ArgsProduct({{1000, 10000, 100000}, {0, 1}});

void BM_IsSatisfied(benchmark::State& state) {
  const auto s = random_update_sequence(static_cast<Key>(state.range(0)), 4 * state.range(0), 3);
  const PointSet p = greedy_execute(s).points;
  for (auto _ : state) benchmark::DoNotOptimize(static_cast<bool>(is_satisfied(p)));
}
BENCHMARK(BM_IsSatisfied)->RangeMultiplier(4)->Range(64, 1024);

void BM_GeometryToTree(benchmark::State& state) {
  const auto s = random_update_sequence(static_cast<Key>(state.range(0)), 4 * state.range(0), 5);
  const PointSet p = greedy_execute(s).points;
  for (auto _ : state) benchmark::DoNotOptimize(geometry_to_tree_offline(p).steps.size());
}
BENCHMARK(BM_GeometryToTree)->RangeMultiplier(4)->Range(64, 1024);

void BM_ContainsPattern(benchmark::State& state) {
  const bool restricted = state.range(1) != 0;
  const auto s = concentrate(gen_deque(1000, static_cast<Time>(state.range(0)), 11, restricted));
  const BinaryMatrix m = matrix_from_pointset(greedy_execute(s).points);
  const Pattern& p = restricted ? p4() : p5();
  for (auto _ : state) benchmark::DoNotOptimize(contains_pattern(m, p).found);
  state.counters["ones"] = static_cast<double>(m.count());
}
BENCHMARK(BM_ContainsPattern)->ArgsProduct({{1000, 10000, 100000}, {0, 1}});

}  // namespace
BENCHMARK_MAIN();
