#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "sga/encoder.hpp"
#include "sga/graph.hpp"

namespace sga {

// Thresholds and budgets for classifier-guided edge edits. An absent pair
// becomes an addition candidate when the model is confident it is an edge of
// either sign; an existing edge becomes a deletion candidate when the model
// has lost confidence in its recorded sign. Candidates are ranked by how far
// past their threshold they sit and then screened one at a time: an edit is
// kept only if it does not lower the local balance of either endpoint on the
// graph as edited so far.
struct AugmentConfig {
  double add_positive_above = 0.9;
  double add_negative_above = 0.95;
  double delete_positive_below = 0.2;
  double delete_negative_below = 0.1;
  bool screen_deletions = true;
  std::int64_t max_additions = 1000;
  std::int64_t max_deletions = 1000;
  // scored universe: pairs within two hops, topped up with random non-edges
  std::int64_t max_universe_pairs = 500000;
  std::int64_t random_universe_pairs = 20000;
};

void validate(const AugmentConfig& config);

struct EdgeEdit {
  enum class Kind { Add, Remove };
  Kind kind = Kind::Add;
  int u = 0;
  int v = 0;
  int sign = 0;        // sign added, or the sign the removed edge had
  double probability = 0.0;  // class probability that triggered the rule
  double margin = 0.0;       // distance past the threshold
  BalanceDelta delta;        // endpoint effect when the edit was screened

  friend bool operator==(const EdgeEdit& a, const EdgeEdit& b) {
    return a.kind == b.kind && a.u == b.u && a.v == b.v && a.sign == b.sign;
  }
};

struct ScoredPair {
  int u = 0;
  int v = 0;
  double p_pos = 0.0;
  double p_neg = 0.0;
};

// Rule layer. Pairs must be absent from / present in the graph respectively.
// When both addition rules fire for a pair, the likelier sign wins, positive
// on a tie.
std::vector<EdgeEdit> addition_candidates(const std::vector<ScoredPair>& pairs,
                                          const AugmentConfig& config);
std::vector<EdgeEdit> deletion_candidates(const SignedGraph& graph,
                                          const std::vector<ScoredPair>& edges,
                                          const AugmentConfig& config);

// Margin-descending merge with per-kind budgets applied first. Determinism:
// ties break on endpoints, then additions ahead of deletions.
std::vector<EdgeEdit> rank_and_cap(std::vector<EdgeEdit> additions,
                                   std::vector<EdgeEdit> deletions,
                                   const AugmentConfig& config);

// Sequential screen against an evolving copy of the graph. Accepted edits
// are applied as they pass; each edit's recorded delta is the one measured
// at its turn. Deletions skip the balance test when screening them is off.
struct ScreenOutcome {
  std::vector<EdgeEdit> accepted;
  std::vector<EdgeEdit> rejected;
  SignedGraph graph;
};
ScreenOutcome screen_edits(SignedGraph graph, const std::vector<EdgeEdit>& ranked,
                           bool screen_deletions);

// Full pipeline: score the candidate universe with the model's embeddings of
// `graph`, apply the rules, rank, and screen. `excluded_pairs` never enter
// the universe. The random share of the universe is drawn from `seed`.
struct AugmentResult {
  std::vector<EdgeEdit> accepted;
  std::vector<EdgeEdit> rejected;
  SignedGraph graph;
  std::int64_t universe_size = 0;
  std::int64_t addition_candidates = 0;
  std::int64_t deletion_candidates = 0;
};
AugmentResult augment_graph(const SignedGraph& graph,
                            const EdgeSignModel& model,
                            const AugmentConfig& config,
                            const std::vector<std::pair<int, int>>& excluded_pairs,
                            std::uint64_t seed);

}  // namespace sga
