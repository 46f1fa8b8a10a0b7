// Command line front end: dataset synthesis and inspection, single training
// runs, augmentation, the ablation grid, and random-rewiring controls.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "sga/experiment.hpp"
#include "sga/rng.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

sga::RunConfig load_config(const std::string& path) {
  if (path.empty()) return sga::RunConfig{};
  return sga::run_config_from_json(sga::read_text_file(path));
}

json metrics_json(const sga::EvalMetrics& m) {
  json j;
  if (m.auc.has_value()) {
    j["auc"] = *m.auc;
  } else {
    j["auc"] = nullptr;
  }
  j["f1_positive"] = m.f1_positive;
  j["f1_micro"] = m.f1_micro;
  j["f1_macro"] = m.f1_macro;
  j["test_edges"] = m.test_edges;
  j["test_positive"] = m.test_positive;
  return j;
}

json aggregate_json(const sga::Aggregate& a) {
  return json{{"mean", a.mean}, {"stddev", a.stddev}, {"count", a.count}};
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string fmt_metric(const std::optional<double>& v) {
  return v.has_value() ? fmt(*v) : std::string("   n/a");
}

void print_metrics(const sga::EvalMetrics& m) {
  std::cout << "  auc          " << fmt_metric(m.auc) << "\n"
            << "  f1 positive  " << fmt(m.f1_positive) << "\n"
            << "  f1 micro     " << fmt(m.f1_micro) << "\n"
            << "  f1 macro     " << fmt(m.f1_macro) << "\n"
            << "  test edges   " << m.test_edges << " (" << m.test_positive
            << " positive)\n";
}

void write_edits_csv(const std::string& path,
                     const std::vector<sga::EdgeEdit>& accepted,
                     const std::vector<sga::EdgeEdit>& rejected) {
  std::string out =
      "# action,u,v,sign,probability,margin,delta_u,delta_v,accepted\n";
  auto append = [&](const sga::EdgeEdit& e, bool ok) {
    out += (e.kind == sga::EdgeEdit::Kind::Add) ? "add," : "remove,";
    out += std::to_string(e.u) + "," + std::to_string(e.v) + "," +
           std::to_string(e.sign) + "," + fmt(e.probability) + "," +
           fmt(e.margin) + "," + fmt(e.delta.du) + "," + fmt(e.delta.dv) +
           "," + (ok ? "1" : "0") + "\n";
  };
  for (const sga::EdgeEdit& e : accepted) append(e, true);
  for (const sga::EdgeEdit& e : rejected) append(e, false);
  sga::write_text_file(path, out);
}

json arm_run_json(const sga::ArmOutcome& r) {
  json j;
  j["arm"] = sga::arm_name(r.arm);
  j["seed"] = r.seed;
  j["metrics"] = metrics_json(r.metrics);
  j["final_loss"] = r.final_loss;
  if (r.augmented) {
    j["accepted_edits"] = r.edits.accepted.size();
    j["rejected_edits"] = r.edits.rejected.size();
    j["universe_size"] = r.edits.universe_size;
  }
  if (!r.warnings.empty()) j["warnings"] = r.warnings;
  return j;
}

int run_synth(const sga::SyntheticConfig& cfg, const std::string& out) {
  const sga::Dataset d = sga::make_synthetic(cfg);
  sga::write_signed_csv(out, d.edges,
                        d.node_names.empty() ? nullptr : &d.node_names);
  const sga::SignedGraph g = d.make_graph();
  std::cout << "wrote " << out << "\n"
            << "  nodes        " << d.num_nodes << "\n"
            << "  edges        " << g.num_edges() << " ("
            << g.num_positive_edges() << " positive, "
            << g.num_negative_edges() << " negative)\n"
            << "  triangles    " << g.graph_triangles().total() << " ("
            << g.graph_triangles().balanced << " balanced)\n";
  return 0;
}

int run_stats(const std::string& path) {
  const sga::Dataset d = sga::read_signed_csv(path);
  const sga::SignedGraph g = d.make_graph();
  double balance_sum = 0.0;
  int isolated = 0;
  for (int v = 0; v < g.num_nodes(); ++v) {
    balance_sum += g.local_balance(v);
    if (g.degree(v) == 0) ++isolated;
  }
  const sga::TriangleTally& t = g.graph_triangles();
  std::cout << "dataset           " << path << "\n"
            << "nodes             " << d.num_nodes << "\n"
            << "raw records       " << d.raw_records << "\n"
            << "raw positive      " << d.raw_positive << "\n"
            << "raw negative      " << d.raw_negative << "\n"
            << "undirected edges  " << g.num_edges() << "\n"
            << "  positive        " << g.num_positive_edges() << "\n"
            << "  negative        " << g.num_negative_edges() << "\n"
            << "triangles         " << t.total() << "\n"
            << "  balanced        " << t.balanced << "\n"
            << "  unbalanced      " << t.unbalanced << "\n";
  if (t.total() > 0) {
    std::cout << "balanced share    "
              << fmt(double(t.balanced) / double(t.total())) << "\n";
  }
  std::cout << "mean local balance "
            << fmt(balance_sum / double(g.num_nodes())) << "\n"
            << "isolated nodes    " << isolated << "\n";
  return 0;
}

int run_augment(const sga::RunConfig& cfg, std::uint64_t seed,
                const std::string& out_dir) {
  fs::create_directories(out_dir);
  const sga::Dataset d = cfg.dataset_path.empty()
                             ? sga::make_synthetic(cfg.synthetic)
                             : sga::read_signed_csv(cfg.dataset_path);
  const sga::SignedGraph g = d.make_graph();
  const std::uint64_t scout_seed =
      sga::derive_seed(seed, sga::seed_tag::augment_encoder);
  sga::EdgeSignModel scout(cfg.model, d.num_nodes, scout_seed);
  std::cout << "training edit model (" << cfg.train.epochs << " epochs, "
            << g.num_edges() << " edges)...\n";
  sga::train_model(scout, g, cfg.train, {}, {}, scout_seed);
  const sga::AugmentResult result =
      sga::augment_graph(g, scout, cfg.augment, {}, scout_seed);

  const fs::path dir(out_dir);
  sga::write_signed_csv((dir / "augmented.csv").string(),
                        result.graph.edges(),
                        d.node_names.empty() ? nullptr : &d.node_names);
  if (!d.node_names.empty()) {
    sga::write_node_map((dir / "nodes.csv").string(), d.node_names);
  }
  write_edits_csv((dir / "edits.csv").string(), result.accepted,
                  result.rejected);
  json j;
  j["seed"] = seed;
  j["universe_size"] = result.universe_size;
  j["addition_candidates"] = result.addition_candidates;
  j["deletion_candidates"] = result.deletion_candidates;
  j["accepted"] = result.accepted.size();
  j["rejected"] = result.rejected.size();
  j["edges_before"] = g.num_edges();
  j["edges_after"] = result.graph.num_edges();
  sga::write_text_file((dir / "augment.json").string(), j.dump(2) + "\n");

  std::cout << "scored " << result.universe_size << " candidate pairs, "
            << result.addition_candidates << " addition / "
            << result.deletion_candidates << " deletion candidates\n"
            << "accepted " << result.accepted.size() << " edits, rejected "
            << result.rejected.size() << " (screen)\n"
            << "edges " << g.num_edges() << " -> "
            << result.graph.num_edges() << "\n"
            << "artifacts in " << out_dir << "\n";
  return 0;
}

int run_train(const sga::RunConfig& cfg, sga::Arm arm, std::uint64_t seed,
              const std::string& out_dir) {
  fs::create_directories(out_dir);
  const sga::PreparedData data = sga::prepare_data(cfg, seed);
  std::cout << "arm " << sga::arm_name(arm) << ", seed " << seed << ": "
            << data.train_graph.num_edges() << " train edges, "
            << data.split.test.size() << " held out\n";
  const sga::ArmOutcome out = sga::run_arm(data, cfg, arm, seed);

  const fs::path dir(out_dir);
  sga::write_text_file((dir / "run_config.json").string(),
                       sga::run_config_to_json(cfg) + "\n");
  sga::write_text_file((dir / "model.json").string(), out.model.serialize());
  json j = arm_run_json(out);
  sga::write_text_file((dir / "metrics.json").string(), j.dump(2) + "\n");
  if (out.augmented) {
    write_edits_csv((dir / "edits.csv").string(), out.edits.accepted,
                    out.edits.rejected);
  }
  for (const std::string& w : out.warnings) {
    std::cout << "warning: " << w << "\n";
  }
  print_metrics(out.metrics);
  std::cout << "final loss   " << fmt(out.final_loss) << "\n"
            << "artifacts in " << out_dir << "\n";
  return 0;
}

int run_evaluate(const sga::RunConfig& cfg, const std::string& model_path,
                 std::uint64_t seed, const std::string& out_path) {
  const sga::PreparedData data = sga::prepare_data(cfg, seed);
  const sga::EdgeSignModel model =
      sga::EdgeSignModel::deserialize(sga::read_text_file(model_path));
  const sga::EvalMetrics m =
      sga::evaluate_model(model, data.train_graph, data.split.test);
  print_metrics(m);
  if (!out_path.empty()) {
    sga::write_text_file(out_path, metrics_json(m).dump(2) + "\n");
    std::cout << "wrote " << out_path << "\n";
  }
  return 0;
}

int run_ablate(const sga::RunConfig& cfg, const std::string& out_dir) {
  fs::create_directories(out_dir);
  const std::vector<sga::Arm> arms = {sga::Arm::Base, sga::Arm::Edits,
                                      sga::Arm::Pacing, sga::Arm::Full};
  json runs = json::array();
  std::vector<std::vector<sga::ArmOutcome>> by_arm(arms.size());
  for (const std::uint64_t seed : cfg.seeds) {
    const sga::PreparedData data = sga::prepare_data(cfg, seed);
    for (std::size_t a = 0; a < arms.size(); ++a) {
      std::cout << "seed " << seed << " " << sga::arm_name(arms[a]) << "..."
                << std::flush;
      sga::ArmOutcome out = sga::run_arm(data, cfg, arms[a], seed);
      std::cout << " auc " << fmt_metric(out.metrics.auc) << ", f1 "
                << fmt(out.metrics.f1_positive) << "\n";
      runs.push_back(arm_run_json(out));
      by_arm[a].push_back(std::move(out));
    }
  }

  json summary = json::array();
  std::cout << "\narm       auc            f1-positive    f1-micro       "
               "f1-macro\n";
  for (std::size_t a = 0; a < arms.size(); ++a) {
    const sga::ArmSummary s = sga::summarize_arm(by_arm[a]);
    json row;
    row["arm"] = sga::arm_name(s.arm);
    row["auc"] = aggregate_json(s.auc);
    row["f1_positive"] = aggregate_json(s.f1_positive);
    row["f1_micro"] = aggregate_json(s.f1_micro);
    row["f1_macro"] = aggregate_json(s.f1_macro);
    summary.push_back(row);
    auto cell = [](const sga::Aggregate& g) {
      return fmt(g.mean) + "+-" + fmt(g.stddev);
    };
    std::printf("%-8s  %s  %s  %s  %s\n", sga::arm_name(s.arm).c_str(),
                cell(s.auc).c_str(), cell(s.f1_positive).c_str(),
                cell(s.f1_micro).c_str(), cell(s.f1_macro).c_str());
  }

  json j;
  j["config"] = json::parse(sga::run_config_to_json(cfg));
  j["runs"] = runs;
  j["summary"] = summary;
  const fs::path dir(out_dir);
  sga::write_text_file((dir / "ablation.json").string(), j.dump(2) + "\n");
  std::cout << "artifacts in " << out_dir << "\n";
  return 0;
}

int run_baselines(const sga::RunConfig& cfg,
                  const std::vector<std::string>& kind_names,
                  const std::vector<double>& ratios,
                  const std::string& out_dir) {
  fs::create_directories(out_dir);
  std::vector<sga::PerturbKind> kinds;
  for (const std::string& k : kind_names) {
    kinds.push_back(sga::perturb_from_name(k));
  }

  json runs = json::array();
  std::vector<double> base_auc;
  struct Cell {
    std::vector<double> auc;
    std::int64_t edits = 0;
  };
  std::vector<std::vector<Cell>> grid(kinds.size(),
                                      std::vector<Cell>(ratios.size()));
  for (const std::uint64_t seed : cfg.seeds) {
    const sga::PreparedData data = sga::prepare_data(cfg, seed);
    const sga::ArmOutcome base = sga::run_arm(data, cfg, sga::Arm::Base, seed);
    if (base.metrics.auc) base_auc.push_back(*base.metrics.auc);
    json b = arm_run_json(base);
    b["kind"] = "none";
    b["ratio"] = 0.0;
    runs.push_back(b);
    for (std::size_t k = 0; k < kinds.size(); ++k) {
      for (std::size_t r = 0; r < ratios.size(); ++r) {
        std::cout << "seed " << seed << " " << sga::perturb_name(kinds[k])
                  << " @" << ratios[r] << "..." << std::flush;
        const sga::BaselineOutcome out =
            sga::run_random_baseline(data, cfg, kinds[k], ratios[r], seed);
        std::cout << " auc " << fmt_metric(out.metrics.auc) << "\n";
        json row;
        row["kind"] = sga::perturb_name(out.kind);
        row["ratio"] = out.ratio;
        row["seed"] = out.seed;
        row["edits_applied"] = out.edits_applied;
        row["metrics"] = metrics_json(out.metrics);
        runs.push_back(row);
        if (out.metrics.auc) grid[k][r].auc.push_back(*out.metrics.auc);
        grid[k][r].edits += out.edits_applied;
      }
    }
  }

  const sga::Aggregate base_agg = sga::aggregate(base_auc);
  std::cout << "\nunperturbed auc " << fmt(base_agg.mean) << "+-"
            << fmt(base_agg.stddev) << "\n"
            << "kind     ratio   auc            delta\n";
  json summary = json::array();
  for (std::size_t k = 0; k < kinds.size(); ++k) {
    for (std::size_t r = 0; r < ratios.size(); ++r) {
      const sga::Aggregate a = sga::aggregate(grid[k][r].auc);
      std::printf("%-7s  %.3f   %s+-%s  %+.4f\n",
                  sga::perturb_name(kinds[k]).c_str(), ratios[r],
                  fmt(a.mean).c_str(), fmt(a.stddev).c_str(),
                  a.mean - base_agg.mean);
      json row;
      row["kind"] = sga::perturb_name(kinds[k]);
      row["ratio"] = ratios[r];
      row["auc"] = aggregate_json(a);
      row["delta_vs_base"] = a.mean - base_agg.mean;
      summary.push_back(row);
    }
  }

  json j;
  j["config"] = json::parse(sga::run_config_to_json(cfg));
  j["base_auc"] = aggregate_json(base_agg);
  j["runs"] = runs;
  j["summary"] = summary;
  const fs::path dir(out_dir);
  sga::write_text_file((dir / "baselines.json").string(), j.dump(2) + "\n");
  std::cout << "artifacts in " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Signed graph augmentation toolkit"};
  app.require_subcommand(1);

  std::string config_path, data_path, out_dir = "out", out_path, model_path;
  std::string arm_name_arg = "base";
  std::uint64_t seed = 0;
  bool seed_given = false;

  sga::SyntheticConfig synth;
  auto* c_synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  c_synth->add_option("--out", out_path, "Output CSV path")->required();
  c_synth->add_option("--nodes", synth.num_nodes, "Node count");
  c_synth->add_option("--density", synth.edge_density, "Edge density");
  c_synth->add_option("--positive-ratio", synth.positive_ratio,
                      "Expected share of positive edges");
  c_synth->add_option("--balance", synth.planted_balance,
                      "Probability an edge follows the planted factions");
  c_synth->add_option("--seed", synth.seed, "Generator seed");

  auto* c_stats = app.add_subcommand("stats", "Describe a dataset");
  c_stats->add_option("--data", data_path, "Edge list CSV")->required();

  auto add_common = [&](CLI::App* c, bool with_out_dir) {
    c->add_option("--config", config_path, "Run configuration JSON");
    auto* s = c->add_option("--seed", seed, "Run seed");
    s->each([&](const std::string&) { seed_given = true; });
    if (with_out_dir) {
      c->add_option("--out-dir", out_dir, "Artifact directory");
    }
  };

  auto* c_aug = app.add_subcommand(
      "augment", "Train an edit model and rewrite the whole graph");
  add_common(c_aug, true);

  auto* c_train = app.add_subcommand(
      "train", "Train one arm on a holdout split and save the model");
  add_common(c_train, true);
  c_train->add_option("--arm", arm_name_arg,
                      "Pipeline arm: base, edits, pacing or full");

  auto* c_eval = app.add_subcommand(
      "evaluate", "Score a saved model on the holdout of a seed");
  add_common(c_eval, false);
  c_eval->add_option("--model", model_path, "Serialized model")->required();
  c_eval->add_option("--out", out_path, "Optional metrics JSON path");

  auto* c_ablate = app.add_subcommand(
      "ablate", "Run every arm over the configured seeds");
  add_common(c_ablate, true);

  std::vector<std::string> kinds = {"add", "remove", "mix"};
  std::vector<double> ratios = {0.05, 0.1, 0.2};
  auto* c_base = app.add_subcommand(
      "baseline-random", "Blind-rewiring controls over the configured seeds");
  add_common(c_base, true);
  c_base->add_option("--kinds", kinds, "Perturbation kinds");
  c_base->add_option("--ratios", ratios, "Edit budgets as edge ratios");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_synth->parsed()) return run_synth(synth, out_path);
    if (c_stats->parsed()) return run_stats(data_path);

    sga::RunConfig cfg = load_config(config_path);
    const std::uint64_t run_seed = seed_given ? seed : cfg.seeds.front();
    if (c_aug->parsed()) return run_augment(cfg, run_seed, out_dir);
    if (c_train->parsed()) {
      return run_train(cfg, sga::arm_from_name(arm_name_arg), run_seed,
                       out_dir);
    }
    if (c_eval->parsed()) {
      return run_evaluate(cfg, model_path, run_seed, out_path);
    }
    if (c_ablate->parsed()) return run_ablate(cfg, out_dir);
    if (c_base->parsed()) return run_baselines(cfg, kinds, ratios, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
