#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace sga {

// Undirected signed edge, canonical form u < v, sign in {+1, -1}.
struct Edge {
  int u = 0;
  int v = 0;
  int sign = 1;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Validates and canonicalizes: swaps endpoints so u < v.
// Throws std::invalid_argument on self loops or sign not in {+1, -1}.
Edge make_edge(int u, int v, int sign);

struct Neighbor {
  int id;
  int sign;
};

struct TriangleTally {
  std::int64_t balanced = 0;
  std::int64_t unbalanced = 0;

  std::int64_t total() const { return balanced + unbalanced; }
  friend bool operator==(const TriangleTally&, const TriangleTally&) = default;
};

// Change in local balance of the two endpoints of an edge edit.
struct BalanceDelta {
  double du = 0.0;
  double dv = 0.0;
};

// In-memory undirected signed graph with per-node triangle tallies that are
// kept current across edge insertions and deletions. A triangle is balanced
// when the product of its three signs is positive. Local balance of a node is
// (balanced - unbalanced) / (balanced + unbalanced) over the triangles through
// it, with a configurable value (default +1) for nodes on no triangle.
class SignedGraph {
 public:
  SignedGraph() = default;

  // Builds the graph and runs the initial triangle census. Duplicate edges
  // with equal signs collapse to one; duplicates with opposing signs throw
  // std::invalid_argument. Node ids outside [0, num_nodes) throw
  // std::out_of_range.
  SignedGraph(int num_nodes, const std::vector<Edge>& edges);

  int num_nodes() const { return static_cast<int>(adjacency_.size()); }
  std::int64_t num_edges() const { return num_edges_; }
  std::int64_t num_positive_edges() const { return num_positive_; }
  std::int64_t num_negative_edges() const { return num_edges_ - num_positive_; }

  bool has_edge(int u, int v) const { return edge_sign(u, v) != 0; }
  // +1/-1 when present, 0 when absent.
  int edge_sign(int u, int v) const;
  const std::vector<Neighbor>& neighbors(int v) const;
  int degree(int v) const { return static_cast<int>(neighbors(v).size()); }

  // Canonical edge list, sorted by (u, v).
  std::vector<Edge> edges() const;

  // Both throw std::invalid_argument when the edit does not apply (edge
  // already present / absent). Triangle tallies are updated in place.
  void add_edge(int u, int v, int sign);
  void remove_edge(int u, int v);

  const TriangleTally& node_triangles(int v) const;
  const TriangleTally& graph_triangles() const { return graph_tally_; }

  // Fresh enumeration, each triangle once as (a, b, c) with a < b < c.
  std::vector<std::array<int, 3>> triangles() const;
  // Sign product of a triangle that must exist; throws otherwise.
  int triangle_sign(int a, int b, int c) const;

  double local_balance(int v) const;
  double zero_triangle_value() const { return zero_triangle_value_; }
  void set_zero_triangle_value(double value) { zero_triangle_value_ = value; }

  // Effect on the endpoints' local balance if the edit were applied,
  // without applying it. Signature mirrors add_edge / remove_edge.
  BalanceDelta add_edge_balance_delta(int u, int v, int sign) const;
  BalanceDelta remove_edge_balance_delta(int u, int v) const;

 private:
  void check_node(int v) const;
  // (balanced, unbalanced) triangles completed by edge (u, v, sign) against
  // the current adjacency.
  std::pair<std::int64_t, std::int64_t> closing_triangles(int u, int v,
                                                          int sign) const;
  void bump_common_neighbors(int u, int v, int sign, int direction);
  double balance_of(const TriangleTally& t) const;

  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<TriangleTally> node_tallies_;
  TriangleTally graph_tally_;
  std::int64_t num_edges_ = 0;
  std::int64_t num_positive_ = 0;
  double zero_triangle_value_ = 1.0;
};

}  // namespace sga
