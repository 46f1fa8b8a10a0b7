#include <doctest.h>

#include <sga/encoder.hpp>
#include <sga/graph.hpp>

#include <cmath>
#include <random>
#include <stdexcept>

#include "helpers.hpp"

using sga::Activation;
using sga::EdgeSignModel;
using sga::ModelConfig;
using sga::PairClass;
using sga::PairSample;
using sga::SignedAdjacency;
using sga::SignedGraph;

namespace {

ModelConfig tiny_config(int d_in, int d, int layers, Activation act) {
  ModelConfig cfg;
  cfg.input_dim = d_in;
  cfg.hidden_dim = d;
  cfg.num_layers = layers;
  cfg.activation = act;
  return cfg;
}

std::vector<PairSample> samples_for(const SignedGraph& g,
                                    std::vector<std::pair<int, int>> none) {
  std::vector<PairSample> out;
  for (const auto& e : g.edges()) {
    out.push_back({e.u, e.v,
                   e.sign > 0 ? PairClass::Positive : PairClass::Negative});
  }
  for (auto [i, j] : none) out.push_back({i, j, PairClass::None});
  return out;
}

}  // namespace

TEST_SUITE("encoder") {

TEST_CASE("adjacency rows are normalized per sign") {
  const SignedGraph g(5, {{0, 1, 1}, {0, 2, 1}, {0, 3, -1}, {1, 2, -1}});
  const auto adj = SignedAdjacency::build(g);
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(5);
  const Eigen::VectorXd pos_sums = adj.pos * ones;
  const Eigen::VectorXd neg_sums = adj.neg * ones;
  // node 0: two positive neighbors, one negative
  CHECK_EQ(pos_sums(0), doctest::Approx(1.0));
  CHECK_EQ(neg_sums(0), doctest::Approx(1.0));
  CHECK_EQ(adj.pos.coeff(0, 1), doctest::Approx(0.5));
  CHECK_EQ(adj.pos.coeff(0, 2), doctest::Approx(0.5));
  CHECK_EQ(adj.neg.coeff(0, 3), doctest::Approx(1.0));
  // node 4 is isolated: all-zero rows, no NaN
  CHECK_EQ(pos_sums(4), 0.0);
  CHECK_EQ(neg_sums(4), 0.0);
  // symmetric counterpart is normalized by the other endpoint's degree
  CHECK_EQ(adj.pos.coeff(1, 0), doctest::Approx(1.0));
}

TEST_CASE("single layer forward against hand arithmetic") {
  const SignedGraph g(2, {{0, 1, 1}});
  const auto adj = SignedAdjacency::build(g);
  EdgeSignModel model(tiny_config(1, 1, 1, Activation::Identity), 2, 77);
  const Eigen::MatrixXd& h0 = model.initial_features();

  auto params = model.parameter_matrices();  // w_pos[0], w_neg[0], theta
  REQUIRE_EQ(params.size(), 3);
  // first layer consumes [neighbor average, self]
  (*params[0]) << 2.0, 0.5;   // positive channel
  (*params[1]) << -1.0, 3.0;  // negative channel (no negative edges here)

  const Eigen::MatrixXd z = model.embeddings(adj);
  REQUIRE_EQ(z.rows(), 2);
  REQUIRE_EQ(z.cols(), 2);
  // positive channel: 2 * (mean of positive neighbors) + 0.5 * self
  CHECK_EQ(z(0, 0), doctest::Approx(2.0 * h0(1, 0) + 0.5 * h0(0, 0)));
  CHECK_EQ(z(1, 0), doctest::Approx(2.0 * h0(0, 0) + 0.5 * h0(1, 0)));
  // negative channel sees an empty neighborhood: only the self term is left
  CHECK_EQ(z(0, 1), doctest::Approx(3.0 * h0(0, 0)));
  CHECK_EQ(z(1, 1), doctest::Approx(3.0 * h0(1, 0)));
}

TEST_CASE("two layer forward routes the channels crosswise") {
  // path 0 -(+)- 1 -(-)- 2
  const SignedGraph g(3, {{0, 1, 1}, {1, 2, -1}});
  const auto adj = SignedAdjacency::build(g);
  EdgeSignModel model(tiny_config(1, 1, 2, Activation::Identity), 3, 5);
  const Eigen::MatrixXd h0 = model.initial_features();

  auto params = model.parameter_matrices();
  REQUIRE_EQ(params.size(), 5);  // w_pos[0], w_pos[1], w_neg[0], w_neg[1], theta
  (*params[0]) << 1.0, 0.0;  // layer-1 positive: neighbor average only
  (*params[2]) << 1.0, 0.0;  // layer-1 negative: neighbor average only
  // layer 2 consumes [friendly neighbors, hostile neighbors, self]
  (*params[1]) << 2.0, 3.0, 5.0;
  (*params[3]) << 7.0, 11.0, 13.0;

  // layer-1 values by hand
  Eigen::Vector3d hp1, hn1;
  hp1 << h0(1, 0), h0(0, 0), 0.0;  // positive neighbor averages
  hn1 << 0.0, h0(2, 0), h0(1, 0);  // negative neighbor averages

  const Eigen::MatrixXd z = model.embeddings(adj);
  // node 1 has positive neighborhood {0} and negative neighborhood {2}
  const double zp1 = 2.0 * hp1(0) + 3.0 * hn1(2) + 5.0 * hp1(1);
  const double zn1 = 7.0 * hn1(0) + 11.0 * hp1(2) + 13.0 * hn1(1);
  CHECK_EQ(z(1, 0), doctest::Approx(zp1));
  CHECK_EQ(z(1, 1), doctest::Approx(zn1));
  // node 0 only has the positive neighbor 1
  const double zp0 = 2.0 * hp1(1) + 5.0 * hp1(0);
  const double zn0 = 7.0 * hn1(1) + 13.0 * hn1(0);
  CHECK_EQ(z(0, 0), doctest::Approx(zp0));
  CHECK_EQ(z(0, 1), doctest::Approx(zn0));
}

TEST_CASE("pair probabilities are a proper softmax") {
  std::mt19937_64 rng(3);
  const int n = 12;
  const SignedGraph g(n, testutil::random_edges(n, 0.4, rng));
  const auto adj = SignedAdjacency::build(g);
  EdgeSignModel model(tiny_config(5, 4, 2, Activation::Tanh), n, 19);
  const Eigen::MatrixXd z = model.embeddings(adj);

  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) pairs.push_back({i, j});
  }
  const Eigen::MatrixXd p = model.pair_probabilities(z, pairs);
  REQUIRE_EQ(p.rows(), Eigen::Index(pairs.size()));
  for (Eigen::Index r = 0; r < p.rows(); ++r) {
    CHECK_EQ(p.row(r).sum(), doctest::Approx(1.0).epsilon(1e-12));
    CHECK_GT(p.row(r).minCoeff(), 0.0);
  }

  CHECK_EQ(EdgeSignModel::sign_score(0.3, 0.1), doctest::Approx(0.75));
  CHECK_EQ(EdgeSignModel::sign_score(0.0, 0.0), doctest::Approx(0.5));
}

TEST_CASE("analytic gradients match finite differences") {
  std::mt19937_64 rng(99);
  for (const Activation act :
       {Activation::Tanh, Activation::ReLU, Activation::Identity}) {
    const int n = 7;
    auto edges = testutil::random_edges(n, 0.5, rng);
    if (edges.empty()) edges.push_back({0, 1, 1});
    const SignedGraph g(n, edges);
    const auto adj = SignedAdjacency::build(g);
    EdgeSignModel model(tiny_config(3, 2, 2, act), n, 7);
    const auto samples = samples_for(g, {{0, 2}, {1, 3}});

    std::vector<Eigen::MatrixXd> grads;
    model.loss_and_gradients(adj, samples, &grads);

    auto params = model.parameter_matrices();
    REQUIRE_EQ(grads.size(), params.size());
    const double eps = 1e-6;
    for (std::size_t p = 0; p < params.size(); ++p) {
      for (Eigen::Index r = 0; r < params[p]->rows(); ++r) {
        for (Eigen::Index c = 0; c < params[p]->cols(); ++c) {
          const double keep = (*params[p])(r, c);
          (*params[p])(r, c) = keep + eps;
          const double up = model.loss_and_gradients(adj, samples, nullptr);
          (*params[p])(r, c) = keep - eps;
          const double down = model.loss_and_gradients(adj, samples, nullptr);
          (*params[p])(r, c) = keep;
          const double fd = (up - down) / (2.0 * eps);
          const double an = grads[p](r, c);
          CHECK_LE(std::abs(fd - an),
                   1e-6 + 1e-4 * (std::abs(fd) + std::abs(an)));
        }
      }
    }
  }
}

TEST_CASE("training lowers the loss with and without adaptive steps") {
  std::mt19937_64 rng(21);
  const int n = 24;
  const SignedGraph g(n, testutil::random_edges(n, 0.3, rng));
  for (const bool adam : {true, false}) {
    EdgeSignModel model(tiny_config(8, 6, 2, Activation::Tanh), n, 3);
    sga::TrainConfig cfg;
    cfg.epochs = adam ? 60 : 150;
    cfg.learning_rate = adam ? 0.01 : 0.2;
    cfg.use_adam = adam;
    const auto result = sga::train_model(model, g, cfg, {}, {}, 3);
    REQUIRE_EQ(result.epoch_loss.size(), std::size_t(cfg.epochs));
    CHECK_LT(result.epoch_loss.back(), 0.8 * result.epoch_loss.front());
  }
}

TEST_CASE("training is deterministic in the seed") {
  std::mt19937_64 rng(4);
  const int n = 16;
  const SignedGraph g(n, testutil::random_edges(n, 0.35, rng));
  sga::TrainConfig cfg;
  cfg.epochs = 25;

  auto run = [&](std::uint64_t seed) {
    EdgeSignModel model(tiny_config(6, 4, 2, Activation::Tanh), n, seed);
    sga::train_model(model, g, cfg, {}, {}, seed);
    return model.serialize();
  };
  CHECK_EQ(run(11), run(11));
  CHECK_NE(run(11), run(12));
}

TEST_CASE("an all-admitting schedule reproduces plain training bit for bit") {
  std::mt19937_64 rng(8);
  const int n = 18;
  const SignedGraph g(n, testutil::random_edges(n, 0.3, rng));
  const auto num_edges = std::int64_t(g.edges().size());
  sga::TrainConfig cfg;
  cfg.epochs = 20;

  EdgeSignModel plain(tiny_config(6, 4, 2, Activation::Tanh), n, 31);
  sga::train_model(plain, g, cfg, {}, {}, 31);

  // any permutation works when every epoch admits everything
  sga::TrainSchedule schedule;
  for (int i = 0; i < num_edges; ++i) {
    schedule.edge_order.push_back(int(num_edges) - 1 - i);
  }
  schedule.admitted_per_epoch.assign(cfg.epochs, num_edges);
  EdgeSignModel scheduled(tiny_config(6, 4, 2, Activation::Tanh), n, 31);
  sga::train_model(scheduled, g, cfg, schedule, {}, 31);

  CHECK_EQ(plain.serialize(), scheduled.serialize());
}

TEST_CASE("non-edge sampling respects exclusions") {
  // K4 missing only (0, 3): the sole candidate non-edge
  const SignedGraph g(4, {{0, 1, 1},
                          {0, 2, 1},
                          {1, 2, -1},
                          {1, 3, 1},
                          {2, 3, 1}});
  sga::TrainConfig cfg;
  cfg.epochs = 1;

  EdgeSignModel a(tiny_config(2, 2, 1, Activation::Tanh), 4, 1);
  const auto with = sga::train_model(a, g, cfg, {}, {}, 1);
  CHECK_EQ(with.none_pool_size, 1);

  EdgeSignModel b(tiny_config(2, 2, 1, Activation::Tanh), 4, 1);
  const auto without = sga::train_model(b, g, cfg, {}, {{3, 0}}, 1);
  CHECK_EQ(without.none_pool_size, 0);
}

TEST_CASE("serialization round trips losslessly") {
  std::mt19937_64 rng(14);
  const int n = 14;
  const SignedGraph g(n, testutil::random_edges(n, 0.3, rng));
  EdgeSignModel model(tiny_config(5, 3, 2, Activation::ReLU), n, 55);
  sga::TrainConfig cfg;
  cfg.epochs = 15;
  sga::train_model(model, g, cfg, {}, {}, 55);

  const std::string blob = model.serialize();
  const EdgeSignModel back = EdgeSignModel::deserialize(blob);
  CHECK_EQ(back.config().num_layers, 2);
  CHECK_EQ(back.config().activation, Activation::ReLU);
  CHECK_EQ(back.seed(), 55);

  const auto adj = SignedAdjacency::build(g);
  const Eigen::MatrixXd za = model.embeddings(adj);
  const Eigen::MatrixXd zb = back.embeddings(adj);
  CHECK_EQ(za, zb);  // exact: same seed-derived inputs, same stored weights
  CHECK_EQ(back.serialize(), blob);
}

TEST_CASE("deserialization rejects malformed payloads") {
  CHECK_THROWS_AS(EdgeSignModel::deserialize("not json"),
                  std::runtime_error);
  CHECK_THROWS_AS(EdgeSignModel::deserialize("{\"format\":99}"),
                  std::runtime_error);

  EdgeSignModel model(tiny_config(2, 2, 1, Activation::Tanh), 3, 1);
  std::string blob = model.serialize();
  // tamper with a stored dimension so shapes disagree
  const auto at = blob.find("\"hidden_dim\":2");
  REQUIRE_NE(at, std::string::npos);
  blob.replace(at, 14, "\"hidden_dim\":3");
  CHECK_THROWS_AS(EdgeSignModel::deserialize(blob), std::runtime_error);
}

TEST_CASE("configuration and input validation") {
  CHECK_THROWS_AS(EdgeSignModel(tiny_config(0, 2, 1, Activation::Tanh), 3, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(EdgeSignModel(tiny_config(2, 2, 0, Activation::Tanh), 3, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(EdgeSignModel(tiny_config(2, 2, 1, Activation::Tanh), 0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(sga::activation_from_name("swish"), std::invalid_argument);

  const SignedGraph g(3, {{0, 1, 1}});
  EdgeSignModel model(tiny_config(2, 2, 1, Activation::Tanh), 3, 1);
  sga::TrainConfig cfg;

  sga::TrainSchedule bad_len;
  bad_len.edge_order = {0, 1, 2};
  CHECK_THROWS_AS(sga::train_model(model, g, cfg, bad_len, {}, 1),
                  std::invalid_argument);

  sga::TrainSchedule not_perm;
  not_perm.edge_order = {0};  // fine: one edge
  not_perm.admitted_per_epoch.assign(std::size_t(cfg.epochs), 1);
  sga::TrainSchedule dup;
  const SignedGraph g2(3, {{0, 1, 1}, {1, 2, -1}});
  dup.edge_order = {0, 0};
  dup.admitted_per_epoch.assign(std::size_t(cfg.epochs), 2);
  EdgeSignModel model2(tiny_config(2, 2, 1, Activation::Tanh), 3, 1);
  CHECK_THROWS_AS(sga::train_model(model2, g2, cfg, dup, {}, 1),
                  std::invalid_argument);

  sga::TrainSchedule short_sched;
  short_sched.edge_order = {1, 0};
  short_sched.admitted_per_epoch.assign(5, 2);  // fewer than cfg.epochs
  CHECK_THROWS_AS(sga::train_model(model2, g2, cfg, short_sched, {}, 1),
                  std::invalid_argument);

  EdgeSignModel mismatched(tiny_config(2, 2, 1, Activation::Tanh), 5, 1);
  CHECK_THROWS_AS(sga::train_model(mismatched, g, cfg, {}, {}, 1),
                  std::invalid_argument);
}

}  // TEST_SUITE
