#include <benchmark/benchmark.h>

#include <sga/encoder.hpp>
#include <sga/graph.hpp>
#include <sga/io.hpp>

#include <utility>
#include <vector>

namespace {

struct Fixture {
  sga::SignedGraph graph;
  sga::SignedAdjacency adj;
  sga::EdgeSignModel model;
  std::vector<sga::PairSample> samples;
};

// Sized like the larger public signed-network datasets.
Fixture make_fixture(int nodes, double density) {
  sga::SyntheticConfig scfg;
  scfg.num_nodes = nodes;
  scfg.edge_density = density;
  scfg.seed = 11;
  auto data = sga::make_synthetic(scfg);
  sga::SignedGraph graph = data.make_graph();
  auto adj = sga::SignedAdjacency::build(graph);
  sga::ModelConfig mcfg;  // defaults: 64/64, 2 layers, tanh
  sga::EdgeSignModel model(mcfg, nodes, 1);
  std::vector<sga::PairSample> samples;
  for (const auto& e : graph.edges()) {
    samples.push_back({e.u, e.v,
                       e.sign > 0 ? sga::PairClass::Positive
                                  : sga::PairClass::Negative});
  }
  return Fixture{std::move(graph), std::move(adj), std::move(model),
                 std::move(samples)};
}

void BM_Embeddings(benchmark::State& state) {
  auto fx = make_fixture(int(state.range(0)), 0.0034);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fx.model.embeddings(fx.adj));
  }
}
BENCHMARK(BM_Embeddings)->Arg(1000)->Arg(3800)->Unit(benchmark::kMillisecond);

void BM_LossAndGradients(benchmark::State& state) {
  auto fx = make_fixture(int(state.range(0)), 0.0034);
  std::vector<Eigen::MatrixXd> grads;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        fx.model.loss_and_gradients(fx.adj, fx.samples, &grads));
  }
}
BENCHMARK(BM_LossAndGradients)
    ->Arg(1000)
    ->Arg(3800)
    ->Unit(benchmark::kMillisecond);

void BM_PairScoring(benchmark::State& state) {
  auto fx = make_fixture(1500, 0.01);
  const Eigen::MatrixXd z = fx.model.embeddings(fx.adj);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < 1000; ++i) {
    for (int j = i + 1; j < i + 40 && j < 1500; ++j) pairs.push_back({i, j});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(fx.model.pair_probabilities(z, pairs));
  }
  state.SetItemsProcessed(state.iterations() * std::int64_t(pairs.size()));
}
BENCHMARK(BM_PairScoring)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
