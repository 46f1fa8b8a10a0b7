#include "sga/encoder.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "sga/rng.hpp"

namespace sga {
namespace {

using json = nlohmann::json;

constexpr int kLossChunk = 4096;

void apply_activation(Eigen::MatrixXd& x, Activation a) {
  switch (a) {
    case Activation::Tanh:
      x = x.array().tanh().matrix();
      break;
    case Activation::ReLU:
      x = x.cwiseMax(0.0);
      break;
    case Activation::Identity:
      break;
  }
}

// Multiplies an upstream gradient by the activation derivative, expressed
// through the activation's own output.
void fold_activation_grad(Eigen::MatrixXd& dh, const Eigen::MatrixXd& h,
                          Activation a) {
  switch (a) {
    case Activation::Tanh:
      dh.array() *= 1.0 - h.array().square();
      break;
    case Activation::ReLU:
      dh.array() *= (h.array() > 0.0).cast<double>();
      break;
    case Activation::Identity:
      break;
  }
}

std::uint64_t pair_key(int u, int v) {
  return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json data = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (static_cast<Eigen::Index>(data.size()) != rows * cols) {
    throw std::runtime_error("matrix payload size mismatch");
  }
  Eigen::MatrixXd m(rows, cols);
  Eigen::Index k = 0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[k++].get<double>();
  }
  return m;
}

}  // namespace

std::string activation_name(Activation a) {
  switch (a) {
    case Activation::Tanh:
      return "tanh";
    case Activation::ReLU:
      return "relu";
    case Activation::Identity:
      return "identity";
  }
  throw std::invalid_argument("unknown activation");
}

Activation activation_from_name(const std::string& name) {
  if (name == "tanh") return Activation::Tanh;
  if (name == "relu") return Activation::ReLU;
  if (name == "identity") return Activation::Identity;
  throw std::invalid_argument("unknown activation '" + name + "'");
}

SignedAdjacency SignedAdjacency::build(const SignedGraph& g) {
  const int n = g.num_nodes();
  std::vector<int> deg_pos(n, 0), deg_neg(n, 0);
  for (int u = 0; u < n; ++u) {
    for (const Neighbor& nb : g.neighbors(u)) {
      (nb.sign > 0 ? deg_pos : deg_neg)[u] += 1;
    }
  }
  std::vector<Eigen::Triplet<double>> tp, tn;
  for (int u = 0; u < n; ++u) {
    for (const Neighbor& nb : g.neighbors(u)) {
      if (nb.sign > 0) {
        tp.emplace_back(u, nb.id, 1.0 / deg_pos[u]);
      } else {
        tn.emplace_back(u, nb.id, 1.0 / deg_neg[u]);
      }
    }
  }
  SignedAdjacency adj;
  adj.pos.resize(n, n);
  adj.neg.resize(n, n);
  adj.pos.setFromTriplets(tp.begin(), tp.end());
  adj.neg.setFromTriplets(tn.begin(), tn.end());
  adj.pos_t = adj.pos.transpose();
  adj.neg_t = adj.neg.transpose();
  return adj;
}

EdgeSignModel::EdgeSignModel(const ModelConfig& config, int num_nodes,
                             std::uint64_t seed)
    : config_(config), num_nodes_(num_nodes), seed_(seed) {
  if (config.input_dim <= 0 || config.hidden_dim <= 0) {
    throw std::invalid_argument("model dimensions must be positive");
  }
  if (config.num_layers < 1) {
    throw std::invalid_argument("model needs at least one layer");
  }
  if (num_nodes <= 0) {
    throw std::invalid_argument("model needs at least one node");
  }
  const int d_in = config.input_dim;
  const int d = config.hidden_dim;

  {
    auto rng = make_rng(seed, seed_tag::initial_features);
    std::normal_distribution<double> unit(0.0, 1.0);
    h0_.resize(num_nodes, d_in);
    for (int i = 0; i < num_nodes; ++i) {
      for (int k = 0; k < d_in; ++k) h0_(i, k) = unit(rng);
    }
  }

  auto rng = make_rng(seed, seed_tag::weight_init);
  std::normal_distribution<double> unit(0.0, 1.0);
  auto init = [&](Eigen::Index rows, Eigen::Index cols) {
    const double scale = std::sqrt(2.0 / double(rows + cols));
    Eigen::MatrixXd w(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) w(r, c) = scale * unit(rng);
    }
    return w;
  };
  w_pos_.reserve(config.num_layers);
  w_neg_.reserve(config.num_layers);
  for (int l = 0; l < config.num_layers; ++l) {
    const Eigen::Index in = l == 0 ? 2 * d_in : 3 * d;
    w_pos_.push_back(init(d, in));
    w_neg_.push_back(init(d, in));
  }
  theta_ = init(4 * d, 3);
}

struct EdgeSignModel::Forward {
  std::vector<Eigen::MatrixXd> c_pos, c_neg;  // layer inputs, concatenated
  std::vector<Eigen::MatrixXd> h_pos, h_neg;  // layer outputs
};

void EdgeSignModel::run_forward(const SignedAdjacency& adj, Forward& f) const {
  const int L = config_.num_layers;
  const int d = config_.hidden_dim;
  const int d_in = config_.input_dim;
  const int n = num_nodes_;
  f.c_pos.resize(L);
  f.c_neg.resize(L);
  f.h_pos.resize(L);
  f.h_neg.resize(L);

  f.c_pos[0].resize(n, 2 * d_in);
  f.c_pos[0].leftCols(d_in) = adj.pos * h0_;
  f.c_pos[0].rightCols(d_in) = h0_;
  f.c_neg[0].resize(n, 2 * d_in);
  f.c_neg[0].leftCols(d_in) = adj.neg * h0_;
  f.c_neg[0].rightCols(d_in) = h0_;
  f.h_pos[0] = f.c_pos[0] * w_pos_[0].transpose();
  apply_activation(f.h_pos[0], config_.activation);
  f.h_neg[0] = f.c_neg[0] * w_neg_[0].transpose();
  apply_activation(f.h_neg[0], config_.activation);

  for (int l = 1; l < L; ++l) {
    const Eigen::MatrixXd& hp = f.h_pos[l - 1];
    const Eigen::MatrixXd& hn = f.h_neg[l - 1];
    // friendly side: friends of friends, enemies of enemies, self
    f.c_pos[l].resize(n, 3 * d);
    f.c_pos[l].leftCols(d) = adj.pos * hp;
    f.c_pos[l].middleCols(d, d) = adj.neg * hn;
    f.c_pos[l].rightCols(d) = hp;
    // hostile side: friends of enemies, enemies of friends, self
    f.c_neg[l].resize(n, 3 * d);
    f.c_neg[l].leftCols(d) = adj.pos * hn;
    f.c_neg[l].middleCols(d, d) = adj.neg * hp;
    f.c_neg[l].rightCols(d) = hn;

    f.h_pos[l] = f.c_pos[l] * w_pos_[l].transpose();
    apply_activation(f.h_pos[l], config_.activation);
    f.h_neg[l] = f.c_neg[l] * w_neg_[l].transpose();
    apply_activation(f.h_neg[l], config_.activation);
  }
}

Eigen::MatrixXd EdgeSignModel::embeddings(const SignedAdjacency& adj) const {
  Forward f;
  run_forward(adj, f);
  const int d = config_.hidden_dim;
  Eigen::MatrixXd z(num_nodes_, 2 * d);
  z.leftCols(d) = f.h_pos.back();
  z.rightCols(d) = f.h_neg.back();
  return z;
}

Eigen::MatrixXd EdgeSignModel::pair_probabilities(
    const Eigen::MatrixXd& z,
    const std::vector<std::pair<int, int>>& pairs) const {
  const Eigen::Index dz = z.cols();
  if (dz != 2 * config_.hidden_dim) {
    throw std::invalid_argument("embedding width does not match the model");
  }
  Eigen::MatrixXd probs(static_cast<Eigen::Index>(pairs.size()), 3);
  Eigen::MatrixXd x;
  for (std::size_t start = 0; start < pairs.size();
       start += std::size_t(kLossChunk)) {
    const auto m = static_cast<Eigen::Index>(
        std::min(pairs.size() - start, std::size_t(kLossChunk)));
    x.resize(m, 2 * dz);
    for (Eigen::Index r = 0; r < m; ++r) {
      const auto& [i, j] = pairs[start + std::size_t(r)];
      x.row(r).head(dz) = z.row(i);
      x.row(r).tail(dz) = z.row(j);
    }
    Eigen::MatrixXd logits = x * theta_;
    for (Eigen::Index r = 0; r < m; ++r) {
      const double mx = logits.row(r).maxCoeff();
      Eigen::RowVector3d e = (logits.row(r).array() - mx).exp();
      probs.row(static_cast<Eigen::Index>(start) + r) = e / e.sum();
    }
  }
  return probs;
}

double EdgeSignModel::sign_score(double p_pos, double p_neg) {
  const double denom = p_pos + p_neg;
  if (denom < 1e-300) return 0.5;
  return p_pos / denom;
}

double EdgeSignModel::loss_and_gradients(
    const SignedAdjacency& adj, const std::vector<PairSample>& samples,
    std::vector<Eigen::MatrixXd>* grads) const {
  if (samples.empty()) throw std::invalid_argument("no samples to score");
  Forward f;
  run_forward(adj, f);

  const int L = config_.num_layers;
  const int d = config_.hidden_dim;
  const Eigen::Index n = num_nodes_;
  Eigen::MatrixXd z(n, 2 * d);
  z.leftCols(d) = f.h_pos.back();
  z.rightCols(d) = f.h_neg.back();

  const auto count = static_cast<Eigen::Index>(samples.size());
  const double inv_n = 1.0 / double(count);
  double loss = 0.0;

  Eigen::MatrixXd dz;
  Eigen::MatrixXd dtheta;
  if (grads) {
    dz = Eigen::MatrixXd::Zero(n, 2 * d);
    dtheta = Eigen::MatrixXd::Zero(4 * d, 3);
  }

  Eigen::MatrixXd x, g;
  for (Eigen::Index start = 0; start < count; start += kLossChunk) {
    const Eigen::Index m = std::min<Eigen::Index>(kLossChunk, count - start);
    x.resize(m, 4 * d);
    for (Eigen::Index r = 0; r < m; ++r) {
      const PairSample& s = samples[std::size_t(start + r)];
      x.row(r).head(2 * d) = z.row(s.i);
      x.row(r).tail(2 * d) = z.row(s.j);
    }
    Eigen::MatrixXd logits = x * theta_;
    g.resize(m, 3);
    for (Eigen::Index r = 0; r < m; ++r) {
      const double mx = logits.row(r).maxCoeff();
      Eigen::RowVector3d e = (logits.row(r).array() - mx).exp();
      Eigen::RowVector3d p = e / e.sum();
      const int label = static_cast<int>(samples[std::size_t(start + r)].label);
      loss -= std::log(std::max(p(label), 1e-300));
      if (grads) {
        p(label) -= 1.0;
        g.row(r) = p * inv_n;
      }
    }
    if (grads) {
      dtheta.noalias() += x.transpose() * g;
      Eigen::MatrixXd dx = g * theta_.transpose();
      for (Eigen::Index r = 0; r < m; ++r) {
        const PairSample& s = samples[std::size_t(start + r)];
        dz.row(s.i) += dx.row(r).head(2 * d);
        dz.row(s.j) += dx.row(r).tail(2 * d);
      }
    }
  }
  loss *= inv_n;
  if (!grads) return loss;

  grads->assign(std::size_t(2 * L) + 1, Eigen::MatrixXd());
  auto& gw = *grads;

  Eigen::MatrixXd dh_pos = dz.leftCols(d);
  Eigen::MatrixXd dh_neg = dz.rightCols(d);
  for (int l = L - 1; l >= 1; --l) {
    fold_activation_grad(dh_pos, f.h_pos[l], config_.activation);
    fold_activation_grad(dh_neg, f.h_neg[l], config_.activation);
    gw[std::size_t(l)].noalias() = dh_pos.transpose() * f.c_pos[l];
    gw[std::size_t(L + l)].noalias() = dh_neg.transpose() * f.c_neg[l];

    const Eigen::MatrixXd dc_pos = dh_pos * w_pos_[std::size_t(l)];
    const Eigen::MatrixXd dc_neg = dh_neg * w_neg_[std::size_t(l)];
    Eigen::MatrixXd next_pos = dc_pos.rightCols(d);
    next_pos.noalias() += adj.pos_t * dc_pos.leftCols(d);
    next_pos.noalias() += adj.neg_t * dc_neg.middleCols(d, d);
    Eigen::MatrixXd next_neg = dc_neg.rightCols(d);
    next_neg.noalias() += adj.neg_t * dc_pos.middleCols(d, d);
    next_neg.noalias() += adj.pos_t * dc_neg.leftCols(d);
    dh_pos = std::move(next_pos);
    dh_neg = std::move(next_neg);
  }
  fold_activation_grad(dh_pos, f.h_pos[0], config_.activation);
  fold_activation_grad(dh_neg, f.h_neg[0], config_.activation);
  gw[0].noalias() = dh_pos.transpose() * f.c_pos[0];
  gw[std::size_t(L)].noalias() = dh_neg.transpose() * f.c_neg[0];
  gw[std::size_t(2 * L)] = std::move(dtheta);
  return loss;
}

std::vector<Eigen::MatrixXd*> EdgeSignModel::parameter_matrices() {
  std::vector<Eigen::MatrixXd*> out;
  for (auto& w : w_pos_) out.push_back(&w);
  for (auto& w : w_neg_) out.push_back(&w);
  out.push_back(&theta_);
  return out;
}

std::vector<const Eigen::MatrixXd*> EdgeSignModel::parameter_matrices() const {
  std::vector<const Eigen::MatrixXd*> out;
  for (const auto& w : w_pos_) out.push_back(&w);
  for (const auto& w : w_neg_) out.push_back(&w);
  out.push_back(&theta_);
  return out;
}

std::string EdgeSignModel::serialize() const {
  json j;
  j["format"] = 1;
  j["input_dim"] = config_.input_dim;
  j["hidden_dim"] = config_.hidden_dim;
  j["num_layers"] = config_.num_layers;
  j["activation"] = activation_name(config_.activation);
  j["num_nodes"] = num_nodes_;
  j["seed"] = seed_;
  json wp = json::array(), wn = json::array();
  for (const auto& w : w_pos_) wp.push_back(matrix_to_json(w));
  for (const auto& w : w_neg_) wn.push_back(matrix_to_json(w));
  j["w_pos"] = std::move(wp);
  j["w_neg"] = std::move(wn);
  j["theta"] = matrix_to_json(theta_);
  return j.dump();
}

EdgeSignModel EdgeSignModel::deserialize(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("model payload is not JSON: ") +
                             e.what());
  }
  if (j.value("format", 0) != 1) {
    throw std::runtime_error("unsupported model format");
  }
  ModelConfig cfg;
  cfg.input_dim = j.at("input_dim").get<int>();
  cfg.hidden_dim = j.at("hidden_dim").get<int>();
  cfg.num_layers = j.at("num_layers").get<int>();
  cfg.activation = activation_from_name(j.at("activation").get<std::string>());
  EdgeSignModel model(cfg, j.at("num_nodes").get<int>(),
                      j.at("seed").get<std::uint64_t>());

  auto load = [](const json& src, Eigen::MatrixXd& dst, const char* what) {
    Eigen::MatrixXd m = matrix_from_json(src);
    if (m.rows() != dst.rows() || m.cols() != dst.cols()) {
      throw std::runtime_error(std::string("unexpected shape for ") + what);
    }
    dst = std::move(m);
  };
  const auto& wp = j.at("w_pos");
  const auto& wn = j.at("w_neg");
  if (static_cast<int>(wp.size()) != cfg.num_layers ||
      static_cast<int>(wn.size()) != cfg.num_layers) {
    throw std::runtime_error("layer count mismatch in model payload");
  }
  for (int l = 0; l < cfg.num_layers; ++l) {
    load(wp[std::size_t(l)], model.w_pos_[std::size_t(l)], "channel weights");
    load(wn[std::size_t(l)], model.w_neg_[std::size_t(l)], "channel weights");
  }
  load(j.at("theta"), model.theta_, "classifier head");
  return model;
}

namespace {

// Uniform sample of pairs that are neither edges nor excluded. Enumerates
// when the pair universe is small, rejection-samples when it is large.
std::vector<std::pair<int, int>> sample_non_edges(
    const SignedGraph& g, std::int64_t want,
    const std::unordered_set<std::uint64_t>& excluded, std::mt19937_64& rng) {
  const std::int64_t n = g.num_nodes();
  const double all_pairs = 0.5 * double(n) * double(n - 1);
  std::vector<std::pair<int, int>> out;
  if (want <= 0) return out;

  if (all_pairs <= 200000.0) {
    std::vector<std::pair<int, int>> eligible;
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        if (g.has_edge(u, v) || excluded.contains(pair_key(u, v))) continue;
        eligible.push_back({u, v});
      }
    }
    std::shuffle(eligible.begin(), eligible.end(), rng);
    const auto take =
        std::min<std::size_t>(eligible.size(), std::size_t(want));
    out.assign(eligible.begin(), eligible.begin() + take);
    return out;
  }

  std::unordered_set<std::uint64_t> taken;
  taken.reserve(std::size_t(want) * 2);
  std::uniform_int_distribution<int> pick(0, int(n - 1));
  while (static_cast<std::int64_t>(out.size()) < want) {
    int u = pick(rng);
    int v = pick(rng);
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    const std::uint64_t key = pair_key(u, v);
    if (g.has_edge(u, v) || excluded.contains(key) || taken.contains(key)) {
      continue;
    }
    taken.insert(key);
    out.push_back({u, v});
  }
  return out;
}

}  // namespace

TrainResult train_model(EdgeSignModel& model, const SignedGraph& graph,
                        const TrainConfig& config,
                        const TrainSchedule& schedule,
                        const std::vector<std::pair<int, int>>& excluded_pairs,
                        std::uint64_t seed) {
  if (model.num_nodes() != graph.num_nodes()) {
    throw std::invalid_argument("model and graph disagree on node count");
  }
  if (config.epochs < 0 || config.learning_rate <= 0.0) {
    throw std::invalid_argument("bad training configuration");
  }
  if (config.none_ratio < 0.0) {
    throw std::invalid_argument("none_ratio must be nonnegative");
  }
  const std::vector<Edge> edges = graph.edges();
  const auto num_edges = static_cast<std::int64_t>(edges.size());
  if (num_edges == 0) throw std::invalid_argument("graph has no edges");

  if (!schedule.admitted_per_epoch.empty() &&
      static_cast<int>(schedule.admitted_per_epoch.size()) < config.epochs) {
    throw std::invalid_argument("schedule shorter than the training run");
  }
  std::vector<std::int64_t> rank;
  if (!schedule.edge_order.empty()) {
    if (static_cast<std::int64_t>(schedule.edge_order.size()) != num_edges) {
      throw std::invalid_argument("schedule order does not cover the edges");
    }
    rank.assign(std::size_t(num_edges), -1);
    for (std::int64_t r = 0; r < num_edges; ++r) {
      const int pos = schedule.edge_order[std::size_t(r)];
      if (pos < 0 || pos >= num_edges || rank[std::size_t(pos)] != -1) {
        throw std::invalid_argument("schedule order is not a permutation");
      }
      rank[std::size_t(pos)] = r;
    }
  }

  std::unordered_set<std::uint64_t> excluded;
  excluded.reserve(excluded_pairs.size() * 2);
  for (auto [u, v] : excluded_pairs) {
    if (u > v) std::swap(u, v);
    excluded.insert(pair_key(u, v));
  }
  auto none_rng = make_rng(seed, seed_tag::none_samples);
  const auto want = std::llround(config.none_ratio * double(num_edges));
  const auto none_pool = sample_non_edges(graph, want, excluded, none_rng);
  const auto pool_size = static_cast<std::int64_t>(none_pool.size());

  const SignedAdjacency adj = SignedAdjacency::build(graph);

  auto params = model.parameter_matrices();
  std::vector<Eigen::MatrixXd> m1, m2;
  if (config.use_adam) {
    for (auto* p : params) {
      m1.push_back(Eigen::MatrixXd::Zero(p->rows(), p->cols()));
      m2.push_back(Eigen::MatrixXd::Zero(p->rows(), p->cols()));
    }
  }

  TrainResult result;
  result.none_pool_size = pool_size;
  result.epoch_loss.reserve(std::size_t(config.epochs));

  std::vector<PairSample> samples;
  std::vector<Eigen::MatrixXd> grads;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::int64_t k = num_edges;
    if (!schedule.admitted_per_epoch.empty()) {
      k = std::clamp<std::int64_t>(
          schedule.admitted_per_epoch[std::size_t(epoch)], 1, num_edges);
    }
    const std::int64_t none_k =
        pool_size == 0
            ? 0
            : std::llround(double(pool_size) * double(k) / double(num_edges));

    samples.clear();
    for (std::int64_t i = 0; i < num_edges; ++i) {
      if (!rank.empty() && rank[std::size_t(i)] >= k) continue;
      const Edge& e = edges[std::size_t(i)];
      samples.push_back(PairSample{
          e.u, e.v, e.sign > 0 ? PairClass::Positive : PairClass::Negative});
    }
    for (std::int64_t i = 0; i < none_k; ++i) {
      const auto& [u, v] = none_pool[std::size_t(i)];
      samples.push_back(PairSample{u, v, PairClass::None});
    }

    const double loss = model.loss_and_gradients(adj, samples, &grads);
    result.epoch_loss.push_back(loss);

    if (config.use_adam) {
      const double t = double(epoch + 1);
      const double bias1 = 1.0 - std::pow(config.adam_beta1, t);
      const double bias2 = 1.0 - std::pow(config.adam_beta2, t);
      for (std::size_t p = 0; p < params.size(); ++p) {
        m1[p] = config.adam_beta1 * m1[p] + (1.0 - config.adam_beta1) * grads[p];
        m2[p] = config.adam_beta2 * m2[p] +
                (1.0 - config.adam_beta2) * grads[p].cwiseProduct(grads[p]);
        params[p]->array() -=
            config.learning_rate * (m1[p].array() / bias1) /
            ((m2[p].array() / bias2).sqrt() + config.adam_epsilon);
      }
    } else {
      for (std::size_t p = 0; p < params.size(); ++p) {
        *params[p] -= config.learning_rate * grads[p];
      }
    }
  }
  return result;
}

}  // namespace sga
