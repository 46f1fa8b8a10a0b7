#pragma once

#include <vector>

#include "sga/encoder.hpp"
#include "sga/graph.hpp"

namespace sga {

// Easy-first pacing: epoch t admits a linearly growing share of the training
// edges, starting at start_fraction and reaching everything after
// ramp_epochs. A ramp of 0 admits everything from the start.
struct CurriculumConfig {
  double start_fraction = 0.25;
  int ramp_epochs = 150;
};

void validate(const CurriculumConfig& config);

// Per-edge difficulty in [0, 1], aligned with the graph's canonical edge
// list. An edge is easy when its endpoints sit on mostly balanced triangles
// and hard when they sit on mostly unbalanced ones; affine in the mean of
// the endpoints' local balance, 0 at +1 and 1 at -1.
std::vector<double> edge_difficulty(const SignedGraph& g);

// Admission plan for train_model: edges sorted easiest first (difficulty
// ties keep canonical order) and per-epoch admitted counts, floor of the
// pacing share times the edge count, never below one edge.
TrainSchedule make_curriculum_schedule(const SignedGraph& g,
                                       const CurriculumConfig& config,
                                       int epochs);

}  // namespace sga
