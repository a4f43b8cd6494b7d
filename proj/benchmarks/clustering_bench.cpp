#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "viewsel/clustering.hpp"
#include "viewsel/harness.hpp"
#include "viewsel/workload.hpp"

namespace {

using namespace viewsel;

std::vector<std::vector<int>> random_rows(std::size_t n, std::size_t p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution bit(0.3);
  std::vector<std::vector<int>> rows(n, std::vector<int>(p));
  for (auto& row : rows) {
    for (int& cell : row) cell = bit(rng);
  }
  return rows;
}

void BM_ClusterRandomRows(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const ClusteringContext ctx = ClusteringContext::from_rows(random_rows(n, 40, 7));
  for (auto _ : state) benchmark::DoNotOptimize(cluster_queries(ctx, 1));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ClusterRandomRows)->RangeMultiplier(2)->Range(8, 128)->Complexity();

void BM_ClusterGeneratedWorkload(benchmark::State& state) {
  const CatalogStats stats = harness::sales_stats(10000000);
  const std::string sql = harness::generate_workload_sql(
      stats, {.queries = static_cast<std::size_t>(state.range(0)), .families = 10, .seed = 5});
  const std::vector<ParsedQuery> workload = parse_workload(sql, stats.fact_table);
  const ClusteringContext ctx = build_context(workload);
  for (auto _ : state) benchmark::DoNotOptimize(cluster_queries(ctx, 5));
}
BENCHMARK(BM_ClusterGeneratedWorkload)->Arg(30)->Arg(60)->Arg(120);

}  // namespace
