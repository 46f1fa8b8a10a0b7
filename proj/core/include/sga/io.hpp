#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sga/graph.hpp"

namespace sga {

// Edge list plus the mapping from dense node ids back to the labels found in
// the source file. Raw record counts are kept from before deduplication so
// directed inputs can be reported as shipped.
struct Dataset {
  int num_nodes = 0;
  std::vector<Edge> edges;
  std::vector<std::string> node_names;
  std::int64_t raw_records = 0;
  std::int64_t raw_positive = 0;
  std::int64_t raw_negative = 0;

  SignedGraph make_graph() const { return SignedGraph(num_nodes, edges); }
};

// Reads "u,v,sign" lines. '#' starts a comment, blank lines are skipped, and
// any columns past the third are ignored. The sign column is numeric and its
// sign is what counts, so ratings work as-is. Node labels are arbitrary
// tokens; they are packed into [0, n) sorted numerically when every label is
// a plain integer and lexicographically otherwise. A pair listed with both
// signs, a self loop, or an unparsable sign throws std::runtime_error naming
// the line.
Dataset read_signed_csv(const std::string& path);
Dataset parse_signed_csv(std::istream& in, const std::string& source_name);

void write_signed_csv(const std::string& path, const std::vector<Edge>& edges,
                      const std::vector<std::string>* node_names = nullptr);

// Two-column "dense_id,label" file recording how node labels were packed.
void write_node_map(const std::string& path,
                    const std::vector<std::string>& node_names);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Planted two-faction generator. Nodes fall into one of two groups; a
// within-group pair leans positive, a cross-group pair negative. Each edge
// follows that pattern with probability planted_balance and otherwise draws
// its sign at random with the target positive rate, so positive_ratio is the
// expected share of positive edges either way while planted_balance controls
// how structurally clean the graph is (1.0 gives a perfectly balanced
// two-faction graph). Group sizes are skewed so that the pattern itself
// produces the requested positive share.
struct SyntheticConfig {
  int num_nodes = 500;
  double edge_density = 0.05;
  double positive_ratio = 0.8;
  double planted_balance = 0.85;
  std::uint64_t seed = 1;
};

Dataset make_synthetic(const SyntheticConfig& config);

}  // namespace sga
