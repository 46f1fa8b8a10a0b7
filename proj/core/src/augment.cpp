#include "sga/augment.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "sga/rng.hpp"

namespace sga {
namespace {

std::uint64_t pair_key(int u, int v) {
  return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
}

bool before(const EdgeEdit& a, const EdgeEdit& b) {
  if (a.margin != b.margin) return a.margin > b.margin;
  if (a.u != b.u) return a.u < b.u;
  if (a.v != b.v) return a.v < b.v;
  return a.kind == EdgeEdit::Kind::Add && b.kind == EdgeEdit::Kind::Remove;
}

}  // namespace

void validate(const AugmentConfig& c) {
  for (const double eps :
       {c.add_positive_above, c.add_negative_above, c.delete_positive_below,
        c.delete_negative_below}) {
    if (eps < 0.0 || eps > 1.0) {
      throw std::invalid_argument("thresholds must lie in [0, 1]");
    }
  }
  if (c.max_additions < 0 || c.max_deletions < 0) {
    throw std::invalid_argument("edit budgets must be nonnegative");
  }
  if (c.max_universe_pairs <= 0 || c.random_universe_pairs < 0) {
    throw std::invalid_argument("universe sizes must be positive");
  }
}

std::vector<EdgeEdit> addition_candidates(const std::vector<ScoredPair>& pairs,
                                          const AugmentConfig& config) {
  std::vector<EdgeEdit> out;
  for (const ScoredPair& s : pairs) {
    const bool as_pos = s.p_pos > config.add_positive_above;
    const bool as_neg = s.p_neg > config.add_negative_above;
    if (!as_pos && !as_neg) continue;
    EdgeEdit e;
    e.kind = EdgeEdit::Kind::Add;
    e.u = s.u;
    e.v = s.v;
    // both rules firing: keep the likelier sign, positive on a tie
    if (as_pos && (!as_neg || s.p_pos >= s.p_neg)) {
      e.sign = 1;
      e.probability = s.p_pos;
      e.margin = s.p_pos - config.add_positive_above;
    } else {
      e.sign = -1;
      e.probability = s.p_neg;
      e.margin = s.p_neg - config.add_negative_above;
    }
    out.push_back(e);
  }
  return out;
}

std::vector<EdgeEdit> deletion_candidates(const SignedGraph& graph,
                                          const std::vector<ScoredPair>& edges,
                                          const AugmentConfig& config) {
  std::vector<EdgeEdit> out;
  for (const ScoredPair& s : edges) {
    const int sign = graph.edge_sign(s.u, s.v);
    if (sign == 0) {
      throw std::invalid_argument("deletion candidate is not an edge");
    }
    EdgeEdit e;
    e.kind = EdgeEdit::Kind::Remove;
    e.u = std::min(s.u, s.v);
    e.v = std::max(s.u, s.v);
    e.sign = sign;
    if (sign > 0 && s.p_pos < config.delete_positive_below) {
      e.probability = s.p_pos;
      e.margin = config.delete_positive_below - s.p_pos;
    } else if (sign < 0 && s.p_neg < config.delete_negative_below) {
      e.probability = s.p_neg;
      e.margin = config.delete_negative_below - s.p_neg;
    } else {
      continue;
    }
    out.push_back(e);
  }
  return out;
}

std::vector<EdgeEdit> rank_and_cap(std::vector<EdgeEdit> additions,
                                   std::vector<EdgeEdit> deletions,
                                   const AugmentConfig& config) {
  std::sort(additions.begin(), additions.end(), before);
  std::sort(deletions.begin(), deletions.end(), before);
  if (static_cast<std::int64_t>(additions.size()) > config.max_additions) {
    additions.resize(static_cast<std::size_t>(config.max_additions));
  }
  if (static_cast<std::int64_t>(deletions.size()) > config.max_deletions) {
    deletions.resize(static_cast<std::size_t>(config.max_deletions));
  }
  std::vector<EdgeEdit> merged;
  merged.reserve(additions.size() + deletions.size());
  std::merge(additions.begin(), additions.end(), deletions.begin(),
             deletions.end(), std::back_inserter(merged), before);
  return merged;
}

ScreenOutcome screen_edits(SignedGraph graph,
                           const std::vector<EdgeEdit>& ranked,
                           bool screen_deletions) {
  ScreenOutcome out;
  for (EdgeEdit e : ranked) {
    if (e.kind == EdgeEdit::Kind::Add) {
      e.delta = graph.add_edge_balance_delta(e.u, e.v, e.sign);
      if (e.delta.du >= 0.0 && e.delta.dv >= 0.0) {
        graph.add_edge(e.u, e.v, e.sign);
        out.accepted.push_back(e);
      } else {
        out.rejected.push_back(e);
      }
    } else {
      e.delta = graph.remove_edge_balance_delta(e.u, e.v);
      if (!screen_deletions || (e.delta.du >= 0.0 && e.delta.dv >= 0.0)) {
        graph.remove_edge(e.u, e.v);
        out.accepted.push_back(e);
      } else {
        out.rejected.push_back(e);
      }
    }
  }
  out.graph = std::move(graph);
  return out;
}

AugmentResult augment_graph(
    const SignedGraph& graph, const EdgeSignModel& model,
    const AugmentConfig& config,
    const std::vector<std::pair<int, int>>& excluded_pairs,
    std::uint64_t seed) {
  validate(config);
  if (model.num_nodes() != graph.num_nodes()) {
    throw std::invalid_argument("model and graph disagree on node count");
  }
  const int n = graph.num_nodes();

  std::unordered_set<std::uint64_t> excluded;
  excluded.reserve(excluded_pairs.size() * 2);
  for (auto [u, v] : excluded_pairs) {
    if (u > v) std::swap(u, v);
    excluded.insert(pair_key(u, v));
  }

  // Universe of absent pairs: everything reachable in two hops, then a
  // random top-up so candidates far from the current structure stay possible.
  auto rng = make_rng(seed, seed_tag::candidate_universe);
  std::vector<std::pair<int, int>> universe;
  {
    std::unordered_set<std::uint64_t> seen;
    for (int u = 0; u < n; ++u) {
      for (const Neighbor& mid : graph.neighbors(u)) {
        for (const Neighbor& w : graph.neighbors(mid.id)) {
          if (w.id <= u) continue;
          const std::uint64_t key = pair_key(u, w.id);
          if (excluded.contains(key) || graph.has_edge(u, w.id)) continue;
          if (seen.insert(key).second) universe.push_back({u, w.id});
        }
      }
    }
    if (static_cast<std::int64_t>(universe.size()) > config.max_universe_pairs) {
      std::shuffle(universe.begin(), universe.end(), rng);
      universe.resize(static_cast<std::size_t>(config.max_universe_pairs));
      std::sort(universe.begin(), universe.end());
    }
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::int64_t wanted = config.random_universe_pairs;
    std::int64_t attempts = 20 * wanted;
    while (wanted > 0 && attempts-- > 0) {
      int u = pick(rng);
      int v = pick(rng);
      if (u == v) continue;
      if (u > v) std::swap(u, v);
      const std::uint64_t key = pair_key(u, v);
      if (graph.has_edge(u, v) || excluded.contains(key) ||
          !seen.insert(key).second) {
        continue;
      }
      universe.push_back({u, v});
      --wanted;
    }
  }

  const SignedAdjacency adj = SignedAdjacency::build(graph);
  const Eigen::MatrixXd z = model.embeddings(adj);

  std::vector<ScoredPair> scored_universe(universe.size());
  {
    const Eigen::MatrixXd probs = model.pair_probabilities(z, universe);
    for (std::size_t i = 0; i < universe.size(); ++i) {
      scored_universe[i] = {universe[i].first, universe[i].second,
                            probs(Eigen::Index(i), 0), probs(Eigen::Index(i), 1)};
    }
  }

  const std::vector<Edge> edges = graph.edges();
  std::vector<std::pair<int, int>> edge_pairs(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edge_pairs[i] = {edges[i].u, edges[i].v};
  }
  std::vector<ScoredPair> scored_edges(edges.size());
  {
    const Eigen::MatrixXd probs = model.pair_probabilities(z, edge_pairs);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      scored_edges[i] = {edges[i].u, edges[i].v, probs(Eigen::Index(i), 0),
                         probs(Eigen::Index(i), 1)};
    }
  }

  auto additions = addition_candidates(scored_universe, config);
  auto deletions = deletion_candidates(graph, scored_edges, config);

  AugmentResult result;
  result.universe_size = static_cast<std::int64_t>(universe.size());
  result.addition_candidates = static_cast<std::int64_t>(additions.size());
  result.deletion_candidates = static_cast<std::int64_t>(deletions.size());

  const auto ranked =
      rank_and_cap(std::move(additions), std::move(deletions), config);
  ScreenOutcome screened =
      screen_edits(graph, ranked, config.screen_deletions);
  result.accepted = std::move(screened.accepted);
  result.rejected = std::move(screened.rejected);
  result.graph = std::move(screened.graph);
  return result;
}

}  // namespace sga
