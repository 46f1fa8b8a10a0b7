#include "sga/experiment.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <unordered_set>
#include <utility>

#include "sga/rng.hpp"

namespace sga {
namespace {

using json = nlohmann::json;

std::uint64_t pair_key(int u, int v) {
  return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
}

[[noreturn]] void throw_joined(const std::string& what,
                               const std::vector<std::string>& errors) {
  std::string msg = what;
  for (const std::string& e : errors) {
    msg += "\n  - ";
    msg += e;
  }
  throw std::runtime_error(msg);
}

const char* json_type_name(const json& v) {
  if (v.is_boolean()) return "boolean";
  if (v.is_number()) return "number";
  if (v.is_string()) return "string";
  if (v.is_array()) return "array";
  if (v.is_object()) return "object";
  return "null";
}

// Field readers that record problems instead of throwing, so one pass can
// report everything wrong with a config file.
struct Reader {
  const json& obj;
  std::string prefix;
  std::vector<std::string>& errors;

  void complain(const std::string& key, const std::string& what) const {
    errors.push_back(prefix.empty() ? key + ": " + what
                                    : prefix + "." + key + ": " + what);
  }

  template <typename T>
  void number(const char* key, T& out) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_number()) {
      complain(key, std::string("expected a number, got ") + json_type_name(v));
      return;
    }
    out = v.get<T>();
  }

  void boolean(const char* key, bool& out) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_boolean()) {
      complain(key, std::string("expected a boolean, got ") + json_type_name(v));
      return;
    }
    out = v.get<bool>();
  }

  void string(const char* key, std::string& out) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_string()) {
      complain(key, std::string("expected a string, got ") + json_type_name(v));
      return;
    }
    out = v.get<std::string>();
  }

  void check_keys(std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
      (void)value;
      if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) {
            return key == a;
          }) == allowed.end()) {
        complain(key, "unknown key");
      }
    }
  }
};

std::vector<std::string> semantic_errors(const RunConfig& c) {
  std::vector<std::string> errors;
  if (c.test_fraction <= 0.0 || c.test_fraction >= 1.0) {
    errors.push_back("test_fraction must lie in (0, 1)");
  }
  if (c.model.input_dim <= 0) errors.push_back("model.input_dim must be positive");
  if (c.model.hidden_dim <= 0) {
    errors.push_back("model.hidden_dim must be positive");
  }
  if (c.model.num_layers < 1) {
    errors.push_back("model.num_layers must be at least 1");
  }
  if (c.train.epochs < 0) errors.push_back("train.epochs must be nonnegative");
  if (c.train.learning_rate <= 0.0) {
    errors.push_back("train.learning_rate must be positive");
  }
  for (const auto& [value, name] :
       {std::pair{c.train.adam_beta1, "train.adam_beta1"},
        std::pair{c.train.adam_beta2, "train.adam_beta2"}}) {
    if (value < 0.0 || value >= 1.0) {
      errors.push_back(std::string(name) + " must lie in [0, 1)");
    }
  }
  if (c.train.adam_epsilon <= 0.0) {
    errors.push_back("train.adam_epsilon must be positive");
  }
  if (c.train.none_ratio < 0.0) {
    errors.push_back("train.none_ratio must be nonnegative");
  }
  try {
    validate(c.augment);
  } catch (const std::exception& e) {
    errors.push_back(std::string("augment: ") + e.what());
  }
  try {
    validate(c.curriculum);
  } catch (const std::exception& e) {
    errors.push_back(std::string("curriculum: ") + e.what());
  }
  if (c.dataset_path.empty()) {
    const SyntheticConfig& s = c.synthetic;
    if (s.num_nodes < 2) {
      errors.push_back("dataset.synthetic.num_nodes must be at least 2");
    }
    if (s.edge_density <= 0.0 || s.edge_density > 1.0) {
      errors.push_back("dataset.synthetic.edge_density must lie in (0, 1]");
    }
    if (s.positive_ratio < 0.0 || s.positive_ratio > 1.0) {
      errors.push_back("dataset.synthetic.positive_ratio must lie in [0, 1]");
    }
    if (s.planted_balance < 0.0 || s.planted_balance > 1.0) {
      errors.push_back("dataset.synthetic.planted_balance must lie in [0, 1]");
    }
  }
  if (c.seeds.empty()) errors.push_back("seeds must not be empty");
  return errors;
}

}  // namespace

std::string arm_name(Arm arm) {
  switch (arm) {
    case Arm::Base:
      return "base";
    case Arm::Edits:
      return "edits";
    case Arm::Pacing:
      return "pacing";
    case Arm::Full:
      return "full";
  }
  throw std::invalid_argument("unknown arm");
}

Arm arm_from_name(const std::string& name) {
  if (name == "base") return Arm::Base;
  if (name == "edits") return Arm::Edits;
  if (name == "pacing") return Arm::Pacing;
  if (name == "full") return Arm::Full;
  throw std::invalid_argument("unknown arm '" + name + "'");
}

std::string perturb_name(PerturbKind kind) {
  switch (kind) {
    case PerturbKind::Add:
      return "add";
    case PerturbKind::Remove:
      return "remove";
    case PerturbKind::Mix:
      return "mix";
  }
  throw std::invalid_argument("unknown perturbation kind");
}

PerturbKind perturb_from_name(const std::string& name) {
  if (name == "add") return PerturbKind::Add;
  if (name == "remove") return PerturbKind::Remove;
  if (name == "mix") return PerturbKind::Mix;
  throw std::invalid_argument("unknown perturbation kind '" + name + "'");
}

void validate(const RunConfig& c) {
  const std::vector<std::string> errors = semantic_errors(c);
  if (!errors.empty()) throw_joined("invalid run configuration:", errors);
}

RunConfig run_config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("configuration is not valid JSON: ") +
                             e.what());
  }
  if (!j.is_object()) {
    throw std::runtime_error("configuration must be a JSON object");
  }

  RunConfig cfg;
  std::vector<std::string> errors;
  Reader top{j, "", errors};
  top.check_keys(
      {"dataset", "test_fraction", "model", "train", "augment", "curriculum",
       "seeds"});
  top.number("test_fraction", cfg.test_fraction);

  if (j.contains("dataset")) {
    const json& d = j.at("dataset");
    if (!d.is_object()) {
      errors.push_back("dataset: expected an object");
    } else {
      Reader r{d, "dataset", errors};
      r.check_keys({"path", "synthetic"});
      r.string("path", cfg.dataset_path);
      if (d.contains("synthetic")) {
        const json& s = d.at("synthetic");
        if (!s.is_object()) {
          errors.push_back("dataset.synthetic: expected an object");
        } else {
          Reader rs{s, "dataset.synthetic", errors};
          rs.check_keys({"num_nodes", "edge_density", "positive_ratio",
                         "planted_balance", "seed"});
          rs.number("num_nodes", cfg.synthetic.num_nodes);
          rs.number("edge_density", cfg.synthetic.edge_density);
          rs.number("positive_ratio", cfg.synthetic.positive_ratio);
          rs.number("planted_balance", cfg.synthetic.planted_balance);
          rs.number("seed", cfg.synthetic.seed);
        }
      }
    }
  }

  if (j.contains("model")) {
    const json& m = j.at("model");
    if (!m.is_object()) {
      errors.push_back("model: expected an object");
    } else {
      Reader r{m, "model", errors};
      r.check_keys({"input_dim", "hidden_dim", "num_layers", "activation"});
      r.number("input_dim", cfg.model.input_dim);
      r.number("hidden_dim", cfg.model.hidden_dim);
      r.number("num_layers", cfg.model.num_layers);
      std::string act;
      r.string("activation", act);
      if (!act.empty()) {
        try {
          cfg.model.activation = activation_from_name(act);
        } catch (const std::exception& e) {
          errors.push_back(std::string("model.activation: ") + e.what());
        }
      }
    }
  }

  if (j.contains("train")) {
    const json& t = j.at("train");
    if (!t.is_object()) {
      errors.push_back("train: expected an object");
    } else {
      Reader r{t, "train", errors};
      r.check_keys({"epochs", "learning_rate", "optimizer", "adam_beta1",
                    "adam_beta2", "adam_epsilon", "none_ratio"});
      r.number("epochs", cfg.train.epochs);
      r.number("learning_rate", cfg.train.learning_rate);
      r.number("adam_beta1", cfg.train.adam_beta1);
      r.number("adam_beta2", cfg.train.adam_beta2);
      r.number("adam_epsilon", cfg.train.adam_epsilon);
      r.number("none_ratio", cfg.train.none_ratio);
      std::string opt;
      r.string("optimizer", opt);
      if (opt == "adam" || opt.empty()) {
        cfg.train.use_adam = true;
      } else if (opt == "sgd") {
        cfg.train.use_adam = false;
      } else {
        errors.push_back("train.optimizer: expected \"adam\" or \"sgd\", got \"" +
                         opt + "\"");
      }
    }
  }

  if (j.contains("augment")) {
    const json& a = j.at("augment");
    if (!a.is_object()) {
      errors.push_back("augment: expected an object");
    } else {
      Reader r{a, "augment", errors};
      r.check_keys({"add_positive_above", "add_negative_above",
                    "delete_positive_below", "delete_negative_below",
                    "screen_deletions", "max_additions", "max_deletions",
                    "max_universe_pairs", "random_universe_pairs"});
      r.number("add_positive_above", cfg.augment.add_positive_above);
      r.number("add_negative_above", cfg.augment.add_negative_above);
      r.number("delete_positive_below", cfg.augment.delete_positive_below);
      r.number("delete_negative_below", cfg.augment.delete_negative_below);
      r.boolean("screen_deletions", cfg.augment.screen_deletions);
      r.number("max_additions", cfg.augment.max_additions);
      r.number("max_deletions", cfg.augment.max_deletions);
      r.number("max_universe_pairs", cfg.augment.max_universe_pairs);
      r.number("random_universe_pairs", cfg.augment.random_universe_pairs);
    }
  }

  if (j.contains("curriculum")) {
    const json& cu = j.at("curriculum");
    if (!cu.is_object()) {
      errors.push_back("curriculum: expected an object");
    } else {
      Reader r{cu, "curriculum", errors};
      r.check_keys({"start_fraction", "ramp_epochs"});
      r.number("start_fraction", cfg.curriculum.start_fraction);
      r.number("ramp_epochs", cfg.curriculum.ramp_epochs);
    }
  }

  if (j.contains("seeds")) {
    const json& s = j.at("seeds");
    if (!s.is_array()) {
      errors.push_back("seeds: expected an array");
    } else {
      cfg.seeds.clear();
      for (const json& v : s) {
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
          errors.push_back("seeds: entries must be nonnegative integers");
          break;
        }
        cfg.seeds.push_back(v.get<std::uint64_t>());
      }
    }
  }

  for (std::string& e : semantic_errors(cfg)) errors.push_back(std::move(e));
  if (!errors.empty()) throw_joined("invalid run configuration:", errors);
  return cfg;
}

std::string run_config_to_json(const RunConfig& c) {
  json j;
  j["dataset"]["path"] = c.dataset_path;
  j["dataset"]["synthetic"] = {{"num_nodes", c.synthetic.num_nodes},
                               {"edge_density", c.synthetic.edge_density},
                               {"positive_ratio", c.synthetic.positive_ratio},
                               {"planted_balance", c.synthetic.planted_balance},
                               {"seed", c.synthetic.seed}};
  j["test_fraction"] = c.test_fraction;
  j["model"] = {{"input_dim", c.model.input_dim},
                {"hidden_dim", c.model.hidden_dim},
                {"num_layers", c.model.num_layers},
                {"activation", activation_name(c.model.activation)}};
  j["train"] = {{"epochs", c.train.epochs},
                {"learning_rate", c.train.learning_rate},
                {"optimizer", c.train.use_adam ? "adam" : "sgd"},
                {"adam_beta1", c.train.adam_beta1},
                {"adam_beta2", c.train.adam_beta2},
                {"adam_epsilon", c.train.adam_epsilon},
                {"none_ratio", c.train.none_ratio}};
  j["augment"] = {{"add_positive_above", c.augment.add_positive_above},
                  {"add_negative_above", c.augment.add_negative_above},
                  {"delete_positive_below", c.augment.delete_positive_below},
                  {"delete_negative_below", c.augment.delete_negative_below},
                  {"screen_deletions", c.augment.screen_deletions},
                  {"max_additions", c.augment.max_additions},
                  {"max_deletions", c.augment.max_deletions},
                  {"max_universe_pairs", c.augment.max_universe_pairs},
                  {"random_universe_pairs", c.augment.random_universe_pairs}};
  j["curriculum"] = {{"start_fraction", c.curriculum.start_fraction},
                     {"ramp_epochs", c.curriculum.ramp_epochs}};
  j["seeds"] = c.seeds;
  return j.dump(2);
}

PreparedData prepare_data(const RunConfig& config, std::uint64_t seed) {
  validate(config);
  Dataset dataset = config.dataset_path.empty()
                        ? make_synthetic(config.synthetic)
                        : read_signed_csv(config.dataset_path);
  EdgeSplit split =
      stratified_edge_split(dataset.edges, config.test_fraction, seed);
  SignedGraph train_graph(dataset.num_nodes, split.train);
  std::vector<std::pair<int, int>> test_pairs;
  test_pairs.reserve(split.test.size());
  for (const Edge& e : split.test) test_pairs.push_back({e.u, e.v});
  return PreparedData{std::move(dataset), std::move(split),
                      std::move(train_graph), std::move(test_pairs)};
}

ArmOutcome run_arm(const PreparedData& data, const RunConfig& config, Arm arm,
                   std::uint64_t seed) {
  const std::uint64_t final_seed = derive_seed(seed, seed_tag::final_train);
  const std::uint64_t scout_seed = derive_seed(seed, seed_tag::augment_encoder);
  const int n = data.dataset.num_nodes;

  std::vector<std::string> warnings = data.split.warnings;
  SignedGraph graph = data.train_graph;
  AugmentResult edits;
  bool augmented = false;

  if (arm == Arm::Edits || arm == Arm::Full) {
    EdgeSignModel scout(config.model, n, scout_seed);
    train_model(scout, graph, config.train, {}, data.test_pairs, scout_seed);
    edits = augment_graph(graph, scout, config.augment, data.test_pairs,
                          scout_seed);
    graph = edits.graph;
    augmented = true;
    if (edits.accepted.empty()) {
      warnings.push_back("augmentation accepted no edits");
    }
  }

  TrainSchedule schedule;
  if (arm == Arm::Pacing || arm == Arm::Full) {
    schedule = make_curriculum_schedule(graph, config.curriculum,
                                        config.train.epochs);
  }

  EdgeSignModel model(config.model, n, final_seed);
  const TrainResult trained = train_model(model, graph, config.train, schedule,
                                          data.test_pairs, final_seed);
  const EvalMetrics metrics = evaluate_model(model, graph, data.split.test);
  if (!metrics.auc.has_value()) {
    warnings.push_back("held-out edges are single-class; no ranking metric");
  }

  return ArmOutcome{arm,
                    seed,
                    metrics,
                    trained.epoch_loss.empty() ? 0.0 : trained.epoch_loss.back(),
                    augmented,
                    std::move(edits),
                    std::move(model),
                    std::move(warnings)};
}

SignedGraph perturb_random(const SignedGraph& g, PerturbKind kind,
                           double ratio,
                           const std::vector<std::pair<int, int>>& excluded,
                           std::uint64_t seed) {
  if (ratio < 0.0 || ratio > 1.0) {
    throw std::invalid_argument("perturbation ratio must lie in [0, 1]");
  }
  const int n = g.num_nodes();
  auto rng = make_rng(seed, seed_tag::perturbation);
  std::unordered_set<std::uint64_t> banned;
  banned.reserve(excluded.size() * 2);
  for (auto [u, v] : excluded) {
    if (u > v) std::swap(u, v);
    banned.insert(pair_key(u, v));
  }

  SignedGraph out = g;
  const auto budget =
      static_cast<std::int64_t>(std::floor(ratio * double(g.num_edges())));
  std::uniform_int_distribution<int> pick(0, n - 1);

  auto try_add = [&]() -> std::optional<Edge> {
    // bounded rejection sampling; dense graphs simply add fewer
    for (int attempt = 0; attempt < 1000; ++attempt) {
      int u = pick(rng);
      int v = pick(rng);
      if (u == v) continue;
      if (u > v) std::swap(u, v);
      if (out.has_edge(u, v) || banned.contains(pair_key(u, v))) continue;
      const int sign = (rng() & 1) ? 1 : -1;
      out.add_edge(u, v, sign);
      return Edge{u, v, sign};
    }
    return std::nullopt;
  };

  if (kind == PerturbKind::Add) {
    for (std::int64_t i = 0; i < budget; ++i) {
      if (!try_add()) break;
    }
  } else if (kind == PerturbKind::Remove) {
    std::vector<Edge> edges = out.edges();
    std::shuffle(edges.begin(), edges.end(), rng);
    const auto removable = std::min<std::int64_t>(
        budget, static_cast<std::int64_t>(edges.size()) - 1);
    for (std::int64_t i = 0; i < removable; ++i) {
      out.remove_edge(edges[std::size_t(i)].u, edges[std::size_t(i)].v);
    }
  } else {
    std::vector<Edge> current = out.edges();
    for (std::int64_t i = 0; i < budget; ++i) {
      const bool remove = (rng() & 1) != 0 && current.size() > 1;
      if (remove) {
        std::uniform_int_distribution<std::size_t> at(0, current.size() - 1);
        const std::size_t idx = at(rng);
        out.remove_edge(current[idx].u, current[idx].v);
        current[idx] = current.back();
        current.pop_back();
      } else if (const std::optional<Edge> added = try_add()) {
        current.push_back(*added);
      }
    }
  }
  return out;
}

BaselineOutcome run_random_baseline(const PreparedData& data,
                                    const RunConfig& config, PerturbKind kind,
                                    double ratio, std::uint64_t seed) {
  const std::uint64_t point =
      derive_seed(derive_seed(seed, seed_tag::perturbation),
                  static_cast<std::uint64_t>(kind) * 1000003ULL +
                      static_cast<std::uint64_t>(std::llround(ratio * 1e6)));
  SignedGraph perturbed =
      perturb_random(data.train_graph, kind, ratio, data.test_pairs, point);
  const std::int64_t edits_applied =
      std::abs(perturbed.num_edges() - data.train_graph.num_edges());

  const std::uint64_t final_seed = derive_seed(seed, seed_tag::final_train);
  EdgeSignModel model(config.model, data.dataset.num_nodes, final_seed);
  train_model(model, perturbed, config.train, {}, data.test_pairs, final_seed);
  const EvalMetrics metrics =
      evaluate_model(model, perturbed, data.split.test);
  return BaselineOutcome{kind, ratio, seed, edits_applied, metrics};
}

ArmSummary summarize_arm(const std::vector<ArmOutcome>& runs) {
  if (runs.empty()) throw std::invalid_argument("no runs to summarize");
  ArmSummary s;
  s.arm = runs.front().arm;
  std::vector<double> auc, f1p, f1mi, f1ma;
  for (const ArmOutcome& r : runs) {
    if (r.arm != s.arm) {
      throw std::invalid_argument("summary mixes different arms");
    }
    if (r.metrics.auc.has_value()) auc.push_back(*r.metrics.auc);
    f1p.push_back(r.metrics.f1_positive);
    f1mi.push_back(r.metrics.f1_micro);
    f1ma.push_back(r.metrics.f1_macro);
  }
  s.auc = aggregate(auc);
  s.f1_positive = aggregate(f1p);
  s.f1_micro = aggregate(f1mi);
  s.f1_macro = aggregate(f1ma);
  return s;
}

}  // namespace sga
