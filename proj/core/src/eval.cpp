#include "sga/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sga/rng.hpp"

namespace sga {

std::optional<double> rank_auc(const std::vector<double>& scores,
                               const std::vector<int>& labels) {
  if (scores.size() != labels.size()) {
    throw std::invalid_argument("scores and labels differ in length");
  }
  std::int64_t num_pos = 0;
  for (const int l : labels) {
    if (l != 0 && l != 1) throw std::invalid_argument("labels must be 0 or 1");
    num_pos += l;
  }
  const auto n = static_cast<std::int64_t>(scores.size());
  const std::int64_t num_neg = n - num_pos;
  if (num_pos == 0 || num_neg == 0) return std::nullopt;

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });

  // average rank over tied blocks, 1-based ranks
  double pos_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * (double(i + 1) + double(j));
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) pos_rank_sum += avg_rank;
    }
    i = j;
  }
  return (pos_rank_sum - 0.5 * double(num_pos) * double(num_pos + 1)) /
         (double(num_pos) * double(num_neg));
}

F1Scores f1_scores(const std::vector<int>& truth,
                   const std::vector<int>& predicted) {
  if (truth.size() != predicted.size()) {
    throw std::invalid_argument("truth and predictions differ in length");
  }
  // confusion counts per class; class 1 = positive, class 0 = negative
  std::int64_t tp[2] = {0, 0}, fp[2] = {0, 0}, fn[2] = {0, 0};
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const int t = truth[i];
    const int p = predicted[i];
    if ((t != 0 && t != 1) || (p != 0 && p != 1)) {
      throw std::invalid_argument("labels must be 0 or 1");
    }
    if (t == p) {
      ++tp[t];
    } else {
      ++fp[p];
      ++fn[t];
    }
  }
  auto f1_of = [](std::int64_t tp_, std::int64_t fp_, std::int64_t fn_) {
    const double denom = double(2 * tp_ + fp_ + fn_);
    return denom == 0.0 ? 0.0 : 2.0 * double(tp_) / denom;
  };
  F1Scores out;
  out.positive = f1_of(tp[1], fp[1], fn[1]);
  out.micro = f1_of(tp[0] + tp[1], fp[0] + fp[1], fn[0] + fn[1]);
  out.macro = 0.5 * (f1_of(tp[0], fp[0], fn[0]) + f1_of(tp[1], fp[1], fn[1]));
  return out;
}

EvalMetrics evaluate_scores(const std::vector<double>& scores,
                            const std::vector<int>& labels, double threshold) {
  EvalMetrics m;
  m.auc = rank_auc(scores, labels);
  std::vector<int> predicted(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    predicted[i] = scores[i] >= threshold ? 1 : 0;
  }
  const F1Scores f1 = f1_scores(labels, predicted);
  m.f1_positive = f1.positive;
  m.f1_micro = f1.micro;
  m.f1_macro = f1.macro;
  m.test_edges = static_cast<std::int64_t>(labels.size());
  for (const int l : labels) m.test_positive += l;
  return m;
}

EvalMetrics evaluate_model(const EdgeSignModel& model, const SignedGraph& graph,
                           const std::vector<Edge>& test_edges) {
  if (test_edges.empty()) {
    throw std::invalid_argument("no held-out edges to evaluate");
  }
  const SignedAdjacency adj = SignedAdjacency::build(graph);
  const Eigen::MatrixXd z = model.embeddings(adj);
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(test_edges.size());
  std::vector<int> labels;
  labels.reserve(test_edges.size());
  for (const Edge& e : test_edges) {
    pairs.push_back({e.u, e.v});
    labels.push_back(e.sign > 0 ? 1 : 0);
  }
  const Eigen::MatrixXd probs = model.pair_probabilities(z, pairs);
  std::vector<double> scores(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    scores[i] = EdgeSignModel::sign_score(probs(Eigen::Index(i), 0),
                                          probs(Eigen::Index(i), 1));
  }
  return evaluate_scores(scores, labels);
}

EdgeSplit stratified_edge_split(const std::vector<Edge>& edges,
                                double test_fraction, std::uint64_t seed) {
  if (test_fraction <= 0.0 || test_fraction >= 1.0) {
    throw std::invalid_argument("test_fraction must lie in (0, 1)");
  }
  if (edges.size() < 2) {
    throw std::invalid_argument("need at least 2 edges to split");
  }
  auto rng = make_rng(seed, seed_tag::split);

  std::vector<Edge> pos, neg;
  for (const Edge& e : edges) (e.sign > 0 ? pos : neg).push_back(e);

  EdgeSplit split;
  auto take = [&](std::vector<Edge>& bucket) {
    std::shuffle(bucket.begin(), bucket.end(), rng);
    const auto n = static_cast<std::int64_t>(bucket.size());
    auto k = std::max<std::int64_t>(1, std::llround(test_fraction * double(n)));
    k = std::min(k, n - 1);  // keep at least one edge in training
    split.test.insert(split.test.end(), bucket.begin(), bucket.begin() + k);
    split.train.insert(split.train.end(), bucket.begin() + k, bucket.end());
  };

  if (pos.size() < 2 || neg.size() < 2) {
    split.stratified = false;
    split.warnings.push_back(
        "a sign class has fewer than 2 edges; falling back to an "
        "unstratified split");
    std::vector<Edge> all(edges);
    take(all);
  } else {
    take(pos);
    take(neg);
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

Aggregate aggregate(const std::vector<double>& values) {
  Aggregate a;
  a.count = static_cast<int>(values.size());
  if (values.empty()) return a;
  a.mean = std::accumulate(values.begin(), values.end(), 0.0) /
           double(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (const double v : values) ss += (v - a.mean) * (v - a.mean);
    a.stddev = std::sqrt(ss / double(values.size() - 1));
  }
  return a;
}

}  // namespace sga
