#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "sga/experiment.hpp"

using namespace sga;

namespace {

RunConfig tiny_config() {
  RunConfig cfg;
  cfg.synthetic.num_nodes = 40;
  cfg.synthetic.edge_density = 0.18;
  cfg.synthetic.positive_ratio = 0.75;
  cfg.synthetic.planted_balance = 0.9;
  cfg.synthetic.seed = 31;
  cfg.model.input_dim = 12;
  cfg.model.hidden_dim = 12;
  cfg.train.epochs = 25;
  cfg.curriculum.ramp_epochs = 10;
  cfg.seeds = {1, 2};
  return cfg;
}

std::set<std::pair<int, int>> pair_set(const std::vector<Edge>& edges) {
  std::set<std::pair<int, int>> out;
  for (const Edge& e : edges) out.insert({e.u, e.v});
  return out;
}

std::vector<Edge> dense_random(int n, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return testutil::random_edges(n, density, rng);
}

}  // namespace

TEST_CASE("arm and perturbation names round-trip") {
  for (const Arm arm : {Arm::Base, Arm::Edits, Arm::Pacing, Arm::Full}) {
    CHECK(arm_from_name(arm_name(arm)) == arm);
  }
  for (const PerturbKind k :
       {PerturbKind::Add, PerturbKind::Remove, PerturbKind::Mix}) {
    CHECK(perturb_from_name(perturb_name(k)) == k);
  }
  CHECK_THROWS_AS(arm_from_name("extra"), std::invalid_argument);
  CHECK_THROWS_AS(perturb_from_name("swap"), std::invalid_argument);
}

TEST_CASE("run config survives a JSON round trip") {
  RunConfig cfg = tiny_config();
  cfg.dataset_path = "data/example.csv";
  cfg.test_fraction = 0.3;
  cfg.model.activation = Activation::ReLU;
  cfg.train.use_adam = false;
  cfg.train.learning_rate = 0.123;
  cfg.augment.max_additions = 7;
  cfg.augment.screen_deletions = false;
  cfg.curriculum.start_fraction = 0.5;
  cfg.seeds = {10, 20, 30};

  const RunConfig back = run_config_from_json(run_config_to_json(cfg));
  CHECK(back.dataset_path == cfg.dataset_path);
  CHECK(back.test_fraction == cfg.test_fraction);
  CHECK(back.synthetic.num_nodes == cfg.synthetic.num_nodes);
  CHECK(back.synthetic.planted_balance == cfg.synthetic.planted_balance);
  CHECK(back.model.input_dim == cfg.model.input_dim);
  CHECK(back.model.activation == Activation::ReLU);
  CHECK(back.train.use_adam == false);
  CHECK(back.train.learning_rate == cfg.train.learning_rate);
  CHECK(back.augment.max_additions == 7);
  CHECK(back.augment.screen_deletions == false);
  CHECK(back.curriculum.start_fraction == 0.5);
  CHECK(back.seeds == cfg.seeds);
}

TEST_CASE("config parsing reports every problem at once") {
  const std::string text = R"({
    "test_fraction": 1.5,
    "bogus": 1,
    "model": {"hidden_dim": "wide"},
    "train": {"optimizer": "adagrad", "epochs": -3},
    "seeds": []
  })";
  std::string message;
  try {
    run_config_from_json(text);
  } catch (const std::runtime_error& e) {
    message = e.what();
  }
  REQUIRE_FALSE(message.empty());
  for (const char* needle :
       {"bogus", "test_fraction", "hidden_dim", "optimizer", "epochs",
        "seeds"}) {
    INFO("missing: " << needle);
    CHECK(message.find(needle) != std::string::npos);
  }
}

TEST_CASE("config parsing rejects non-JSON and non-object input") {
  CHECK_THROWS_AS(run_config_from_json("not json"), std::runtime_error);
  CHECK_THROWS_AS(run_config_from_json("[1, 2]"), std::runtime_error);
}

TEST_CASE("defaults validate cleanly") {
  CHECK_NOTHROW(validate(RunConfig{}));
  CHECK_NOTHROW(validate(run_config_from_json("{}")));
}

TEST_CASE("prepare_data pairs splits across calls with the same seed") {
  const RunConfig cfg = tiny_config();
  const PreparedData a = prepare_data(cfg, 5);
  const PreparedData b = prepare_data(cfg, 5);
  const PreparedData c = prepare_data(cfg, 6);
  CHECK(pair_set(a.split.test) == pair_set(b.split.test));
  CHECK(pair_set(a.split.test) != pair_set(c.split.test));
  CHECK(a.test_pairs.size() == a.split.test.size());
  CHECK(a.train_graph.num_edges() ==
        std::int64_t(a.split.train.size()));
  // no held-out edge leaks into the training graph
  for (const auto& [u, v] : a.test_pairs) {
    CHECK_FALSE(a.train_graph.has_edge(u, v));
  }
}

TEST_CASE("perturb_random: additions respect budget, bans and signs") {
  SignedGraph g(20, dense_random(20, 0.35, 123));
  const std::vector<std::pair<int, int>> banned = {{0, 1}, {2, 3}, {4, 5}};
  SignedGraph out = perturb_random(g, PerturbKind::Add, 0.25, banned, 9);
  const std::int64_t budget = std::int64_t(0.25 * g.num_edges());
  CHECK(out.num_edges() == g.num_edges() + budget);
  const auto before = pair_set(g.edges());
  for (const Edge& e : out.edges()) {
    CHECK((e.sign == 1 || e.sign == -1));
    if (!before.contains({e.u, e.v})) {
      for (const auto& b : banned) {
        CHECK(std::pair{e.u, e.v} != b);
      }
    }
  }
  // original edges are untouched
  for (const Edge& e : g.edges()) {
    CHECK(out.edge_sign(e.u, e.v) == e.sign);
  }
}

TEST_CASE("perturb_random: removals draw from existing edges only") {
  SignedGraph g(20, dense_random(20, 0.35, 321));
  SignedGraph out = perturb_random(g, PerturbKind::Remove, 0.3, {}, 9);
  const std::int64_t budget = std::int64_t(0.3 * g.num_edges());
  CHECK(out.num_edges() == g.num_edges() - budget);
  const auto before = pair_set(g.edges());
  for (const Edge& e : out.edges()) {
    CHECK(before.contains({e.u, e.v}));
  }
}

TEST_CASE("perturb_random: removal budget never empties the graph") {
  SignedGraph g(5, {Edge{0, 1, 1}, Edge{1, 2, -1}});
  SignedGraph out = perturb_random(g, PerturbKind::Remove, 1.0, {}, 4);
  CHECK(out.num_edges() == 1);
}

TEST_CASE("perturb_random: mix keeps the edit budget and stays consistent") {
  SignedGraph g(24, dense_random(24, 0.3, 777));
  SignedGraph out = perturb_random(g, PerturbKind::Mix, 0.25, {{0, 1}}, 13);
  const std::int64_t budget = std::int64_t(0.25 * g.num_edges());
  const auto before = pair_set(g.edges());
  const auto after = pair_set(out.edges());
  std::int64_t added = 0, removed = 0;
  for (const auto& p : after) {
    if (!before.contains(p)) ++added;
  }
  for (const auto& p : before) {
    if (!after.contains(p)) ++removed;
  }
  CHECK(added + removed <= budget);
  CHECK(added + removed > 0);
}

TEST_CASE("perturb_random: zero ratio is the identity, bad ratio throws") {
  SignedGraph g(10, dense_random(10, 0.4, 55));
  SignedGraph out = perturb_random(g, PerturbKind::Mix, 0.0, {}, 1);
  CHECK(pair_set(out.edges()) == pair_set(g.edges()));
  CHECK_THROWS_AS(perturb_random(g, PerturbKind::Add, -0.1, {}, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(perturb_random(g, PerturbKind::Add, 1.5, {}, 1),
                  std::invalid_argument);
}

TEST_CASE("edits arm with a zero edit budget reproduces the base run") {
  RunConfig cfg = tiny_config();
  cfg.augment.max_additions = 0;
  cfg.augment.max_deletions = 0;
  const PreparedData data = prepare_data(cfg, 3);
  const ArmOutcome base = run_arm(data, cfg, Arm::Base, 3);
  const ArmOutcome edits = run_arm(data, cfg, Arm::Edits, 3);
  CHECK(edits.augmented);
  CHECK(edits.edits.accepted.empty());
  CHECK(base.model.serialize() == edits.model.serialize());
  CHECK(base.metrics.f1_micro == edits.metrics.f1_micro);
  CHECK(base.final_loss == edits.final_loss);
}

TEST_CASE("pacing arm that admits everything reproduces the base run") {
  RunConfig cfg = tiny_config();
  cfg.curriculum.start_fraction = 1.0;
  const PreparedData data = prepare_data(cfg, 4);
  const ArmOutcome base = run_arm(data, cfg, Arm::Base, 4);
  const ArmOutcome pacing = run_arm(data, cfg, Arm::Pacing, 4);
  CHECK(base.model.serialize() == pacing.model.serialize());
}

TEST_CASE("arms differ once the curriculum actually gates edges") {
  RunConfig cfg = tiny_config();
  cfg.curriculum.start_fraction = 0.3;
  const PreparedData data = prepare_data(cfg, 4);
  const ArmOutcome base = run_arm(data, cfg, Arm::Base, 4);
  const ArmOutcome pacing = run_arm(data, cfg, Arm::Pacing, 4);
  CHECK(base.model.serialize() != pacing.model.serialize());
}

TEST_CASE("random baseline at ratio zero is metric-identical to base") {
  const RunConfig cfg = tiny_config();
  const PreparedData data = prepare_data(cfg, 8);
  const ArmOutcome base = run_arm(data, cfg, Arm::Base, 8);
  const BaselineOutcome b =
      run_random_baseline(data, cfg, PerturbKind::Mix, 0.0, 8);
  CHECK(b.edits_applied == 0);
  CHECK(b.metrics.f1_micro == base.metrics.f1_micro);
  CHECK(b.metrics.auc.has_value() == base.metrics.auc.has_value());
  if (b.metrics.auc && base.metrics.auc) {
    CHECK(*b.metrics.auc == *base.metrics.auc);
  }
}

TEST_CASE("summarize_arm aggregates runs and rejects mixed arms") {
  RunConfig cfg = tiny_config();
  cfg.train.epochs = 8;
  const PreparedData d1 = prepare_data(cfg, 1);
  const PreparedData d2 = prepare_data(cfg, 2);
  std::vector<ArmOutcome> runs;
  runs.push_back(run_arm(d1, cfg, Arm::Base, 1));
  runs.push_back(run_arm(d2, cfg, Arm::Base, 2));
  const ArmSummary s = summarize_arm(runs);
  CHECK(s.arm == Arm::Base);
  CHECK(s.f1_micro.count == 2);
  CHECK(s.f1_micro.mean ==
        doctest::Approx(0.5 * (runs[0].metrics.f1_micro +
                               runs[1].metrics.f1_micro)));
  runs.push_back(run_arm(d1, cfg, Arm::Pacing, 1));
  CHECK_THROWS_AS(summarize_arm(runs), std::invalid_argument);
  CHECK_THROWS_AS(summarize_arm({}), std::invalid_argument);
}

TEST_CASE("full arm runs end to end on a small instance") {
  RunConfig cfg = tiny_config();
  cfg.augment.add_positive_above = 0.6;
  cfg.augment.add_negative_above = 0.6;
  cfg.augment.max_additions = 10;
  cfg.augment.max_deletions = 5;
  const PreparedData data = prepare_data(cfg, 12);
  const ArmOutcome full = run_arm(data, cfg, Arm::Full, 12);
  CHECK(full.arm == Arm::Full);
  CHECK(full.augmented);
  CHECK(full.metrics.test_edges == std::int64_t(data.split.test.size()));
  // accepted edits are reflected in the graph the arm trained on
  const std::int64_t delta =
      full.edits.graph.num_edges() - data.train_graph.num_edges();
  std::int64_t expect = 0;
  for (const EdgeEdit& e : full.edits.accepted) {
    expect += (e.kind == EdgeEdit::Kind::Add) ? 1 : -1;
  }
  CHECK(delta == expect);
}
