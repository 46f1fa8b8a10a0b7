#include "sga/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace sga {

Edge make_edge(int u, int v, int sign) {
  if (u == v) {
    throw std::invalid_argument("self loop on node " + std::to_string(u));
  }
  if (sign != 1 && sign != -1) {
    throw std::invalid_argument("edge sign must be +1 or -1, got " +
                                std::to_string(sign));
  }
  if (u > v) std::swap(u, v);
  return Edge{u, v, sign};
}

SignedGraph::SignedGraph(int num_nodes, const std::vector<Edge>& edges) {
  if (num_nodes < 0) {
    throw std::invalid_argument("negative node count");
  }
  adjacency_.resize(num_nodes);
  node_tallies_.resize(num_nodes);

  std::vector<Edge> canon;
  canon.reserve(edges.size());
  for (const Edge& e : edges) {
    Edge c = make_edge(e.u, e.v, e.sign);
    if (c.u < 0 || c.v >= num_nodes) {
      throw std::out_of_range("edge endpoint outside [0, " +
                              std::to_string(num_nodes) + ")");
    }
    canon.push_back(c);
  }
  std::sort(canon.begin(), canon.end());
  canon.erase(std::unique(canon.begin(), canon.end()), canon.end());
  for (std::size_t i = 1; i < canon.size(); ++i) {
    if (canon[i].u == canon[i - 1].u && canon[i].v == canon[i - 1].v) {
      throw std::invalid_argument(
          "conflicting signs for edge (" + std::to_string(canon[i].u) + ", " +
          std::to_string(canon[i].v) + ")");
    }
  }

  // Adjacency first (degree counting pass keeps reallocation down), census
  // afterwards via the same closing-triangle query used by the incremental
  // path, one edge at a time against the part already inserted.
  std::vector<int> deg(num_nodes, 0);
  for (const Edge& e : canon) {
    ++deg[e.u];
    ++deg[e.v];
  }
  for (int v = 0; v < num_nodes; ++v) adjacency_[v].reserve(deg[v]);

  for (const Edge& e : canon) {
    auto [bal, unb] = closing_triangles(e.u, e.v, e.sign);
    bump_common_neighbors(e.u, e.v, e.sign, +1);
    node_tallies_[e.u].balanced += bal;
    node_tallies_[e.u].unbalanced += unb;
    node_tallies_[e.v].balanced += bal;
    node_tallies_[e.v].unbalanced += unb;
    graph_tally_.balanced += bal;
    graph_tally_.unbalanced += unb;

    adjacency_[e.u].push_back(Neighbor{e.v, e.sign});
    adjacency_[e.v].push_back(Neighbor{e.u, e.sign});
    ++num_edges_;
    if (e.sign > 0) ++num_positive_;
  }
  for (auto& list : adjacency_) {
    std::sort(list.begin(), list.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.id < b.id; });
  }
}

void SignedGraph::check_node(int v) const {
  if (v < 0 || v >= num_nodes()) {
    throw std::out_of_range("node " + std::to_string(v) + " outside [0, " +
                            std::to_string(num_nodes()) + ")");
  }
}

int SignedGraph::edge_sign(int u, int v) const {
  check_node(u);
  check_node(v);
  if (u == v) return 0;
  // Probe the shorter list.
  const auto& list = adjacency_[u].size() <= adjacency_[v].size()
                         ? adjacency_[u]
                         : adjacency_[v];
  const int target = (&list == &adjacency_[u]) ? v : u;
  auto it = std::lower_bound(
      list.begin(), list.end(), target,
      [](const Neighbor& n, int id) { return n.id < id; });
  if (it != list.end() && it->id == target) return it->sign;
  return 0;
}

const std::vector<Neighbor>& SignedGraph::neighbors(int v) const {
  check_node(v);
  return adjacency_[v];
}

std::vector<Edge> SignedGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(static_cast<std::size_t>(num_edges_));
  for (int u = 0; u < num_nodes(); ++u) {
    for (const Neighbor& n : adjacency_[u]) {
      if (n.id > u) out.push_back(Edge{u, n.id, n.sign});
    }
  }
  return out;
}

std::pair<std::int64_t, std::int64_t> SignedGraph::closing_triangles(
    int u, int v, int sign) const {
  const auto& a = adjacency_[u];
  const auto& b = adjacency_[v];
  std::int64_t bal = 0;
  std::int64_t unb = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].id < b[j].id) {
      ++i;
    } else if (a[i].id > b[j].id) {
      ++j;
    } else {
      if (sign * a[i].sign * b[j].sign > 0) {
        ++bal;
      } else {
        ++unb;
      }
      ++i;
      ++j;
    }
  }
  return {bal, unb};
}

void SignedGraph::bump_common_neighbors(int u, int v, int sign,
                                        int direction) {
  const auto& a = adjacency_[u];
  const auto& b = adjacency_[v];
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].id < b[j].id) {
      ++i;
    } else if (a[i].id > b[j].id) {
      ++j;
    } else {
      TriangleTally& t = node_tallies_[a[i].id];
      if (sign * a[i].sign * b[j].sign > 0) {
        t.balanced += direction;
      } else {
        t.unbalanced += direction;
      }
      ++i;
      ++j;
    }
  }
}

void SignedGraph::add_edge(int u, int v, int sign) {
  Edge e = make_edge(u, v, sign);
  check_node(e.u);
  check_node(e.v);
  if (has_edge(e.u, e.v)) {
    throw std::invalid_argument("edge (" + std::to_string(e.u) + ", " +
                                std::to_string(e.v) + ") already present");
  }
  auto [bal, unb] = closing_triangles(e.u, e.v, e.sign);
  bump_common_neighbors(e.u, e.v, e.sign, +1);
  node_tallies_[e.u].balanced += bal;
  node_tallies_[e.u].unbalanced += unb;
  node_tallies_[e.v].balanced += bal;
  node_tallies_[e.v].unbalanced += unb;
  graph_tally_.balanced += bal;
  graph_tally_.unbalanced += unb;

  auto insert_sorted = [](std::vector<Neighbor>& list, Neighbor n) {
    auto it = std::lower_bound(
        list.begin(), list.end(), n.id,
        [](const Neighbor& a, int id) { return a.id < id; });
    list.insert(it, n);
  };
  insert_sorted(adjacency_[e.u], Neighbor{e.v, e.sign});
  insert_sorted(adjacency_[e.v], Neighbor{e.u, e.sign});
  ++num_edges_;
  if (e.sign > 0) ++num_positive_;
}

void SignedGraph::remove_edge(int u, int v) {
  if (u > v) std::swap(u, v);
  check_node(u);
  check_node(v);
  const int sign = edge_sign(u, v);
  if (sign == 0) {
    throw std::invalid_argument("edge (" + std::to_string(u) + ", " +
                                std::to_string(v) + ") not present");
  }
  auto erase_sorted = [](std::vector<Neighbor>& list, int id) {
    auto it = std::lower_bound(
        list.begin(), list.end(), id,
        [](const Neighbor& a, int i) { return a.id < i; });
    list.erase(it);
  };
  erase_sorted(adjacency_[u], v);
  erase_sorted(adjacency_[v], u);
  --num_edges_;
  if (sign > 0) --num_positive_;

  // With the edge gone, closing_triangles sees exactly the triangles the
  // edge was part of.
  auto [bal, unb] = closing_triangles(u, v, sign);
  bump_common_neighbors(u, v, sign, -1);
  node_tallies_[u].balanced -= bal;
  node_tallies_[u].unbalanced -= unb;
  node_tallies_[v].balanced -= bal;
  node_tallies_[v].unbalanced -= unb;
  graph_tally_.balanced -= bal;
  graph_tally_.unbalanced -= unb;
}

const TriangleTally& SignedGraph::node_triangles(int v) const {
  check_node(v);
  return node_tallies_[v];
}

std::vector<std::array<int, 3>> SignedGraph::triangles() const {
  std::vector<std::array<int, 3>> out;
  for (int u = 0; u < num_nodes(); ++u) {
    for (const Neighbor& n : adjacency_[u]) {
      const int v = n.id;
      if (v <= u) continue;
      const auto& a = adjacency_[u];
      const auto& b = adjacency_[v];
      std::size_t i = 0;
      std::size_t j = 0;
      while (i < a.size() && j < b.size()) {
        if (a[i].id < b[j].id) {
          ++i;
        } else if (a[i].id > b[j].id) {
          ++j;
        } else {
          if (a[i].id > v) out.push_back({u, v, a[i].id});
          ++i;
          ++j;
        }
      }
    }
  }
  return out;
}

int SignedGraph::triangle_sign(int a, int b, int c) const {
  const int sab = edge_sign(a, b);
  const int sbc = edge_sign(b, c);
  const int sac = edge_sign(a, c);
  if (sab == 0 || sbc == 0 || sac == 0) {
    throw std::invalid_argument("(" + std::to_string(a) + ", " +
                                std::to_string(b) + ", " + std::to_string(c) +
                                ") is not a triangle");
  }
  return sab * sbc * sac;
}

double SignedGraph::balance_of(const TriangleTally& t) const {
  const std::int64_t total = t.balanced + t.unbalanced;
  if (total == 0) return zero_triangle_value_;
  return static_cast<double>(t.balanced - t.unbalanced) /
         static_cast<double>(total);
}

double SignedGraph::local_balance(int v) const {
  check_node(v);
  return balance_of(node_tallies_[v]);
}

BalanceDelta SignedGraph::add_edge_balance_delta(int u, int v,
                                                 int sign) const {
  Edge e = make_edge(u, v, sign);
  check_node(e.u);
  check_node(e.v);
  if (has_edge(e.u, e.v)) {
    throw std::invalid_argument("edge (" + std::to_string(e.u) + ", " +
                                std::to_string(e.v) + ") already present");
  }
  auto [bal, unb] = closing_triangles(e.u, e.v, e.sign);
  BalanceDelta d;
  TriangleTally tu = node_tallies_[e.u];
  TriangleTally tv = node_tallies_[e.v];
  const double before_u = balance_of(tu);
  const double before_v = balance_of(tv);
  tu.balanced += bal;
  tu.unbalanced += unb;
  tv.balanced += bal;
  tv.unbalanced += unb;
  d.du = balance_of(tu) - before_u;
  d.dv = balance_of(tv) - before_v;
  if (u > v) std::swap(d.du, d.dv);
  return d;
}

BalanceDelta SignedGraph::remove_edge_balance_delta(int u, int v) const {
  const bool swapped = u > v;
  if (swapped) std::swap(u, v);
  check_node(u);
  check_node(v);
  const int sign = edge_sign(u, v);
  if (sign == 0) {
    throw std::invalid_argument("edge (" + std::to_string(u) + ", " +
                                std::to_string(v) + ") not present");
  }
  // Common neighbors of u and v are exactly the triangles the edge sits on;
  // the edge itself never pairs with itself in the merge join.
  auto [bal, unb] = closing_triangles(u, v, sign);
  BalanceDelta d;
  TriangleTally tu = node_tallies_[u];
  TriangleTally tv = node_tallies_[v];
  const double before_u = balance_of(tu);
  const double before_v = balance_of(tv);
  tu.balanced -= bal;
  tu.unbalanced -= unb;
  tv.balanced -= bal;
  tv.unbalanced -= unb;
  d.du = balance_of(tu) - before_u;
  d.dv = balance_of(tv) - before_v;
  if (swapped) std::swap(d.du, d.dv);
  return d;
}

}  // namespace sga
