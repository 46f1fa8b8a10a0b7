#pragma once

#include <sga/graph.hpp>

#include <map>
#include <random>
#include <utility>
#include <vector>

// Reference implementations kept deliberately naive and independent of the
// library internals, so tests compare two different routes to the same answer.
namespace testutil {

struct Census {
  std::vector<sga::TriangleTally> node;
  sga::TriangleTally graph;
};

inline Census brute_census(int n, const std::vector<sga::Edge>& edges) {
  std::map<std::pair<int, int>, int> sign;
  for (const auto& e : edges) {
    sign[{std::min(e.u, e.v), std::max(e.u, e.v)}] = e.sign;
  }
  auto lookup = [&](int a, int b) {
    auto it = sign.find({std::min(a, b), std::max(a, b)});
    return it == sign.end() ? 0 : it->second;
  };
  Census c;
  c.node.resize(n);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const int sab = lookup(a, b);
      if (sab == 0) continue;
      for (int d = b + 1; d < n; ++d) {
        const int sbd = lookup(b, d);
        const int sad = lookup(a, d);
        if (sbd == 0 || sad == 0) continue;
        const bool balanced = sab * sbd * sad > 0;
        for (int v : {a, b, d}) {
          if (balanced) {
            ++c.node[v].balanced;
          } else {
            ++c.node[v].unbalanced;
          }
        }
        if (balanced) {
          ++c.graph.balanced;
        } else {
          ++c.graph.unbalanced;
        }
      }
    }
  }
  return c;
}

inline double brute_local_balance(const sga::TriangleTally& t,
                                  double zero_value) {
  const auto total = t.balanced + t.unbalanced;
  if (total == 0) return zero_value;
  return double(t.balanced - t.unbalanced) / double(total);
}

inline std::vector<sga::Edge> random_edges(int n, double density,
                                           std::mt19937_64& rng) {
  std::bernoulli_distribution keep(density);
  std::bernoulli_distribution positive(0.5);
  std::vector<sga::Edge> out;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (keep(rng)) out.push_back({u, v, positive(rng) ? 1 : -1});
    }
  }
  return out;
}

}  // namespace testutil
