#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sga/graph.hpp"

namespace sga {

enum class Activation { Tanh, ReLU, Identity };

std::string activation_name(Activation a);
Activation activation_from_name(const std::string& name);

// Pair classes the model distinguishes. None marks sampled non-edges.
enum class PairClass : int { Positive = 0, Negative = 1, None = 2 };

struct ModelConfig {
  int input_dim = 64;
  int hidden_dim = 64;
  int num_layers = 2;
  Activation activation = Activation::Tanh;
};

// Row-normalized positive / negative adjacency, plus transposes for the
// backward pass. Rows with no neighbors of a sign stay all-zero.
struct SignedAdjacency {
  Eigen::SparseMatrix<double, Eigen::RowMajor> pos, neg, pos_t, neg_t;
  static SignedAdjacency build(const SignedGraph& g);
};

struct PairSample {
  int i = 0;
  int j = 0;
  PairClass label = PairClass::None;
};

// Node embedding model over a signed graph with a 3-way classifier head.
//
// Two message-passing channels are kept per node. The first layer mixes each
// channel's neighborhood average with the raw features; deeper layers route
// positive neighbors of the positive channel and negative neighbors of the
// negative channel back into the positive channel, and the two cross terms
// into the negative channel, so "enemy of my enemy" information lands on the
// friendly side. The final embedding is the two channels side by side, and a
// linear head over concatenated endpoint embeddings scores a node pair as
// positive, negative, or not an edge.
//
// Raw input features are a fixed Gaussian matrix regenerated from the stored
// seed; they are not trained. All gradients are computed in closed form.
class EdgeSignModel {
 public:
  EdgeSignModel(const ModelConfig& config, int num_nodes, std::uint64_t seed);

  const ModelConfig& config() const { return config_; }
  int num_nodes() const { return num_nodes_; }
  std::uint64_t seed() const { return seed_; }
  int embedding_dim() const { return 2 * config_.hidden_dim; }
  const Eigen::MatrixXd& initial_features() const { return h0_; }

  // n x 2d embedding matrix for the graph behind `adj`.
  Eigen::MatrixXd embeddings(const SignedAdjacency& adj) const;

  // Row per pair with columns (positive, negative, none), rows sum to 1.
  Eigen::MatrixXd pair_probabilities(
      const Eigen::MatrixXd& z,
      const std::vector<std::pair<int, int>>& pairs) const;

  // Collapses a probability row to P(positive | it is an edge).
  static double sign_score(double p_pos, double p_neg);

  // Mean cross-entropy over the samples; when `grads` is given it is filled
  // with matching-order gradients for parameter_matrices().
  double loss_and_gradients(const SignedAdjacency& adj,
                            const std::vector<PairSample>& samples,
                            std::vector<Eigen::MatrixXd>* grads) const;

  // Stable order: positive-channel weights by layer, negative-channel
  // weights by layer, classifier head last.
  std::vector<Eigen::MatrixXd*> parameter_matrices();
  std::vector<const Eigen::MatrixXd*> parameter_matrices() const;

  std::string serialize() const;
  static EdgeSignModel deserialize(const std::string& text);

 private:
  ModelConfig config_;
  int num_nodes_ = 0;
  std::uint64_t seed_ = 0;
  Eigen::MatrixXd h0_;
  std::vector<Eigen::MatrixXd> w_pos_, w_neg_;
  Eigen::MatrixXd theta_;

  struct Forward;
  void run_forward(const SignedAdjacency& adj, Forward& f) const;
};

struct TrainConfig {
  int epochs = 300;
  double learning_rate = 0.01;
  bool use_adam = true;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  // sampled non-edges per labeled edge, drawn once per run
  double none_ratio = 1.0;
};

// Per-epoch admission when training under a schedule. edge_order holds
// positions in the graph's canonical edge list sorted easiest first;
// admitted_per_epoch[t] says how many of those participate in epoch t.
// Empty vectors mean everything participates every epoch; the arithmetic of
// that case is identical to a schedule admitting everything, update for
// update. Sampled non-edges are admitted proportionally.
struct TrainSchedule {
  std::vector<int> edge_order;
  std::vector<std::int64_t> admitted_per_epoch;
};

struct TrainResult {
  std::vector<double> epoch_loss;
  std::int64_t none_pool_size = 0;
};

// Full-batch training of model weights on the graph's edges plus sampled
// non-edges. `excluded_pairs` (canonical u < v) are never drawn as non-edge
// samples; pass held-out pairs here. The non-edge pool is derived from
// `seed` independently of the model's own seed.
TrainResult train_model(EdgeSignModel& model, const SignedGraph& graph,
                        const TrainConfig& config,
                        const TrainSchedule& schedule,
                        const std::vector<std::pair<int, int>>& excluded_pairs,
                        std::uint64_t seed);

}  // namespace sga
