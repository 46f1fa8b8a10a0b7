#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sga/encoder.hpp"
#include "sga/graph.hpp"

namespace sga {

// Area under the ROC curve by average ranks; tied scores share credit.
// Empty when only one label is present, since ranking quality is undefined
// there.
std::optional<double> rank_auc(const std::vector<double>& scores,
                               const std::vector<int>& labels);

// F1 family for binary sign prediction. `positive` scores the positive
// class; `micro` pools the confusion counts (for single-label binary tasks
// it equals plain accuracy); `macro` averages the per-class F1 of both
// classes. A class that is never predicted and never true contributes 0.
struct F1Scores {
  double positive = 0.0;
  double micro = 0.0;
  double macro = 0.0;
};
F1Scores f1_scores(const std::vector<int>& truth,
                   const std::vector<int>& predicted);

struct EvalMetrics {
  std::optional<double> auc;
  double f1_positive = 0.0;
  double f1_micro = 0.0;
  double f1_macro = 0.0;
  std::int64_t test_edges = 0;
  std::int64_t test_positive = 0;
};

// Thresholds the scores (>= threshold reads as positive), then computes the
// full metric set.
EvalMetrics evaluate_scores(const std::vector<double>& scores,
                            const std::vector<int>& labels,
                            double threshold = 0.5);

// Scores the held-out edges with embeddings computed on `graph` (the graph
// that was trained on; it must not contain the held-out edges). The score of
// a pair is its positive probability renormalized over the two edge classes.
EvalMetrics evaluate_model(const EdgeSignModel& model, const SignedGraph& graph,
                           const std::vector<Edge>& test_edges);

// Sign-stratified holdout split. Each sign class contributes
// max(1, round(test_fraction * class size)) test edges, capped so at least
// one edge of the class stays in training. Classes with fewer than two edges
// make stratification impossible; the split then falls back to a plain
// shuffle and says so in `warnings`.
struct EdgeSplit {
  std::vector<Edge> train;
  std::vector<Edge> test;
  bool stratified = true;
  std::vector<std::string> warnings;
};
EdgeSplit stratified_edge_split(const std::vector<Edge>& edges,
                                double test_fraction, std::uint64_t seed);

struct Aggregate {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation
  int count = 0;
};
Aggregate aggregate(const std::vector<double>& values);

}  // namespace sga
