#include "sga/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "sga/rng.hpp"

namespace sga {
namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool is_plain_integer(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isdigit(c) != 0;
  });
}

[[noreturn]] void fail(const std::string& source, std::size_t line,
                       const std::string& what) {
  throw std::runtime_error(source + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

Dataset parse_signed_csv(std::istream& in, const std::string& source_name) {
  struct RawEdge {
    std::string a;
    std::string b;
    int sign;
  };
  std::vector<RawEdge> raw;
  Dataset out;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.resize(hash);
    }
    if (trim(line).empty()) continue;

    std::stringstream cells(line);
    std::string a, b, s;
    if (!std::getline(cells, a, ',') || !std::getline(cells, b, ',') ||
        !std::getline(cells, s, ',')) {
      fail(source_name, line_no, "expected at least 3 comma-separated columns");
    }
    a = trim(a);
    b = trim(b);
    s = trim(s);
    if (a.empty() || b.empty()) fail(source_name, line_no, "empty node label");
    if (a == b) fail(source_name, line_no, "self loop on '" + a + "'");

    double value = 0.0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    if (!s.empty() && s.front() == '+') ++first;  // from_chars rejects '+'
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last) {
      fail(source_name, line_no, "cannot parse sign column '" + s + "'");
    }
    if (value == 0.0) fail(source_name, line_no, "sign column is zero");

    const int sign = value > 0.0 ? 1 : -1;
    raw.push_back(RawEdge{std::move(a), std::move(b), sign});
    ++out.raw_records;
    if (sign > 0) {
      ++out.raw_positive;
    } else {
      ++out.raw_negative;
    }
  }

  // Pack labels into dense ids with a stable order.
  std::vector<std::string> labels;
  {
    std::unordered_set<std::string> seen;
    for (const RawEdge& e : raw) {
      if (seen.insert(e.a).second) labels.push_back(e.a);
      if (seen.insert(e.b).second) labels.push_back(e.b);
    }
  }
  const bool numeric =
      std::all_of(labels.begin(), labels.end(), is_plain_integer);
  if (numeric) {
    std::sort(labels.begin(), labels.end(),
              [](const std::string& x, const std::string& y) {
                if (x.size() != y.size()) return x.size() < y.size();
                return x < y;
              });
  } else {
    std::sort(labels.begin(), labels.end());
  }
  std::unordered_map<std::string, int> dense;
  dense.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    dense[labels[i]] = static_cast<int>(i);
  }

  std::map<std::pair<int, int>, int> undirected;
  for (const RawEdge& e : raw) {
    int u = dense[e.a];
    int v = dense[e.b];
    if (u > v) std::swap(u, v);
    auto [it, inserted] = undirected.try_emplace({u, v}, e.sign);
    if (!inserted && it->second != e.sign) {
      throw std::runtime_error(source_name + ": pair ('" + e.a + "', '" + e.b +
                               "') appears with both signs");
    }
  }

  out.num_nodes = static_cast<int>(labels.size());
  out.node_names = std::move(labels);
  out.edges.reserve(undirected.size());
  for (const auto& [key, sign] : undirected) {
    out.edges.push_back(Edge{key.first, key.second, sign});
  }
  return out;
}

Dataset read_signed_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return parse_signed_csv(in, path);
}

void write_signed_csv(const std::string& path, const std::vector<Edge>& edges,
                      const std::vector<std::string>* node_names) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "# u,v,sign\n";
  for (const Edge& e : edges) {
    if (node_names) {
      out << node_names->at(e.u) << ',' << node_names->at(e.v);
    } else {
      out << e.u << ',' << e.v;
    }
    out << ',' << (e.sign > 0 ? "1" : "-1") << '\n';
  }
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

void write_node_map(const std::string& path,
                    const std::vector<std::string>& node_names) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "# dense_id,label\n";
  for (std::size_t i = 0; i < node_names.size(); ++i) {
    out << i << ',' << node_names[i] << '\n';
  }
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

Dataset make_synthetic(const SyntheticConfig& config) {
  if (config.num_nodes < 2) {
    throw std::invalid_argument("synthetic graph needs at least 2 nodes");
  }
  if (config.edge_density <= 0.0 || config.edge_density > 1.0) {
    throw std::invalid_argument("edge_density must be in (0, 1]");
  }
  if (config.positive_ratio < 0.0 || config.positive_ratio > 1.0) {
    throw std::invalid_argument("positive_ratio must be in [0, 1]");
  }
  if (config.planted_balance < 0.0 || config.planted_balance > 1.0) {
    throw std::invalid_argument("planted_balance must be in [0, 1]");
  }

  const int n = config.num_nodes;
  const double rho = config.positive_ratio;
  auto rng = make_rng(config.seed, seed_tag::synthetic);

  // P(same group) for a random pair is s^2 + (1-s)^2 with group-0 share s;
  // solving for the target positive rate gives the skew below. Below
  // rho = 1/2 the pattern cannot be that negative-heavy with two groups, so
  // the noise channel carries the difference.
  const double s = (1.0 + std::sqrt(std::max(0.0, 2.0 * rho - 1.0))) / 2.0;
  std::bernoulli_distribution group0(s);
  std::vector<int> group(n);
  for (int i = 0; i < n; ++i) group[i] = group0(rng) ? 0 : 1;

  const double all_pairs = 0.5 * static_cast<double>(n) * (n - 1);
  const auto target =
      std::max<std::int64_t>(1, std::llround(config.edge_density * all_pairs));
  if (target > static_cast<std::int64_t>(all_pairs)) {
    throw std::invalid_argument("edge_density asks for more pairs than exist");
  }

  std::uniform_int_distribution<int> pick(0, n - 1);
  std::bernoulli_distribution follows_pattern(config.planted_balance);
  std::bernoulli_distribution noise_positive(rho);
  std::unordered_set<std::uint64_t> used;
  used.reserve(static_cast<std::size_t>(target) * 2);
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(target));
  while (static_cast<std::int64_t>(edges.size()) < target) {
    int u = pick(rng);
    int v = pick(rng);
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    const std::uint64_t key =
        (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
    if (!used.insert(key).second) continue;
    int sign;
    if (follows_pattern(rng)) {
      sign = group[u] == group[v] ? 1 : -1;
    } else {
      sign = noise_positive(rng) ? 1 : -1;
    }
    edges.push_back(Edge{u, v, sign});
  }
  std::sort(edges.begin(), edges.end());

  Dataset out;
  out.num_nodes = n;
  out.edges = std::move(edges);
  out.node_names.reserve(n);
  for (int i = 0; i < n; ++i) out.node_names.push_back(std::to_string(i));
  out.raw_records = static_cast<std::int64_t>(out.edges.size());
  for (const Edge& e : out.edges) {
    if (e.sign > 0) {
      ++out.raw_positive;
    } else {
      ++out.raw_negative;
    }
  }
  return out;
}

}  // namespace sga
