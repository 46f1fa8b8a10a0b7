#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sga/augment.hpp"
#include "sga/curriculum.hpp"
#include "sga/encoder.hpp"
#include "sga/eval.hpp"
#include "sga/io.hpp"

namespace sga {

// Pipeline variants. Base trains on the split as-is; Edits first rewires the
// training graph with classifier-guided edge edits; Pacing trains easy-first;
// Full does both, pacing computed on the edited graph.
enum class Arm { Base, Edits, Pacing, Full };

std::string arm_name(Arm arm);
Arm arm_from_name(const std::string& name);

struct RunConfig {
  std::string dataset_path;  // CSV path; empty synthesizes a dataset instead
  SyntheticConfig synthetic;
  double test_fraction = 0.2;
  ModelConfig model;
  TrainConfig train;
  AugmentConfig augment;
  CurriculumConfig curriculum;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
};

// Throws std::runtime_error carrying every problem found, not just the
// first.
void validate(const RunConfig& config);
RunConfig run_config_from_json(const std::string& text);
std::string run_config_to_json(const RunConfig& config);

// Dataset, holdout split and training graph for one seed. Splits with the
// same seed are identical across arms, so arm comparisons are paired.
struct PreparedData {
  Dataset dataset;
  EdgeSplit split;
  SignedGraph train_graph;
  std::vector<std::pair<int, int>> test_pairs;
};
PreparedData prepare_data(const RunConfig& config, std::uint64_t seed);

struct ArmOutcome {
  Arm arm = Arm::Base;
  std::uint64_t seed = 0;
  EvalMetrics metrics;
  double final_loss = 0.0;
  bool augmented = false;
  AugmentResult edits;  // meaningful when augmented
  EdgeSignModel model;
  std::vector<std::string> warnings;
};

// Runs one arm at one seed. The final training always consumes the same
// seed stream regardless of arm, so arms that end up with an identical
// training graph produce identical models.
ArmOutcome run_arm(const PreparedData& data, const RunConfig& config, Arm arm,
                   std::uint64_t seed);

// Random-rewiring control: the same budget of edits as a ratio of the
// training edges, but chosen blindly. Additions draw uniform absent pairs
// with a uniform sign, removals draw uniform existing edges, and the mixed
// kind flips a coin per edit.
enum class PerturbKind { Add, Remove, Mix };
std::string perturb_name(PerturbKind kind);
PerturbKind perturb_from_name(const std::string& name);

SignedGraph perturb_random(const SignedGraph& g, PerturbKind kind,
                           double ratio,
                           const std::vector<std::pair<int, int>>& excluded,
                           std::uint64_t seed);

struct BaselineOutcome {
  PerturbKind kind = PerturbKind::Add;
  double ratio = 0.0;
  std::uint64_t seed = 0;
  std::int64_t edits_applied = 0;
  EvalMetrics metrics;
};
BaselineOutcome run_random_baseline(const PreparedData& data,
                                    const RunConfig& config, PerturbKind kind,
                                    double ratio, std::uint64_t seed);

// Mean and spread of a metric across runs of one arm. AUC aggregates over
// the runs where it exists.
struct ArmSummary {
  Arm arm = Arm::Base;
  Aggregate auc;
  Aggregate f1_positive;
  Aggregate f1_micro;
  Aggregate f1_macro;
};
ArmSummary summarize_arm(const std::vector<ArmOutcome>& runs);

}  // namespace sga
