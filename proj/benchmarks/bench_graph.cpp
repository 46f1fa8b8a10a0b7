#include <benchmark/benchmark.h>

#include <sga/graph.hpp>
#include <sga/io.hpp>

#include <random>

namespace {

sga::Dataset synthetic(int nodes, double density) {
  sga::SyntheticConfig cfg;
  cfg.num_nodes = nodes;
  cfg.edge_density = density;
  cfg.seed = 7;
  return sga::make_synthetic(cfg);
}

void BM_TriangleCensus(benchmark::State& state) {
  const auto data = synthetic(int(state.range(0)), 0.02);
  for (auto _ : state) {
    sga::SignedGraph g(data.num_nodes, data.edges);
    benchmark::DoNotOptimize(g.graph_triangles());
  }
  state.SetItemsProcessed(state.iterations() * std::int64_t(data.edges.size()));
}
BENCHMARK(BM_TriangleCensus)->Arg(500)->Arg(2000)->Arg(4000);

void BM_EdgeEditRoundTrip(benchmark::State& state) {
  const auto data = synthetic(int(state.range(0)), 0.02);
  sga::SignedGraph g = data.make_graph();
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> pick(0, g.num_nodes() - 1);
  for (auto _ : state) {
    int u = pick(rng);
    int v = pick(rng);
    if (u == v || g.has_edge(u, v)) continue;
    g.add_edge(u, v, 1);
    g.remove_edge(u, v);
  }
}
BENCHMARK(BM_EdgeEditRoundTrip)->Arg(500)->Arg(4000);

void BM_BalanceDeltaQuery(benchmark::State& state) {
  const auto data = synthetic(int(state.range(0)), 0.02);
  const sga::SignedGraph g = data.make_graph();
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> pick(0, g.num_nodes() - 1);
  for (auto _ : state) {
    int u = pick(rng);
    int v = pick(rng);
    if (u == v || g.has_edge(u, v)) continue;
    benchmark::DoNotOptimize(g.add_edge_balance_delta(u, v, -1));
  }
}
BENCHMARK(BM_BalanceDeltaQuery)->Arg(500)->Arg(4000);

}  // namespace

BENCHMARK_MAIN();
