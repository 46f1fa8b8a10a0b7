#include "sga/curriculum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sga {

void validate(const CurriculumConfig& config) {
  if (config.start_fraction <= 0.0 || config.start_fraction > 1.0) {
    throw std::invalid_argument("start_fraction must lie in (0, 1]");
  }
  if (config.ramp_epochs < 0) {
    throw std::invalid_argument("ramp_epochs must be nonnegative");
  }
}

std::vector<double> edge_difficulty(const SignedGraph& g) {
  std::vector<double> balance(static_cast<std::size_t>(g.num_nodes()));
  for (int v = 0; v < g.num_nodes(); ++v) {
    balance[static_cast<std::size_t>(v)] = g.local_balance(v);
  }
  const auto edges = g.edges();
  std::vector<double> out;
  out.reserve(edges.size());
  for (const Edge& e : edges) {
    out.push_back(0.5 - (balance[std::size_t(e.u)] + balance[std::size_t(e.v)]) / 4.0);
  }
  return out;
}

TrainSchedule make_curriculum_schedule(const SignedGraph& g,
                                       const CurriculumConfig& config,
                                       int epochs) {
  validate(config);
  if (epochs < 0) throw std::invalid_argument("epochs must be nonnegative");
  const std::vector<double> difficulty = edge_difficulty(g);
  const auto num_edges = static_cast<std::int64_t>(difficulty.size());
  if (num_edges == 0) throw std::invalid_argument("graph has no edges");

  TrainSchedule schedule;
  schedule.edge_order.resize(static_cast<std::size_t>(num_edges));
  std::iota(schedule.edge_order.begin(), schedule.edge_order.end(), 0);
  std::stable_sort(schedule.edge_order.begin(), schedule.edge_order.end(),
                   [&](int a, int b) {
                     return difficulty[std::size_t(a)] < difficulty[std::size_t(b)];
                   });

  schedule.admitted_per_epoch.reserve(static_cast<std::size_t>(epochs));
  for (int t = 0; t < epochs; ++t) {
    double share = 1.0;
    if (config.ramp_epochs > 0) {
      share = std::min(1.0, config.start_fraction +
                                (1.0 - config.start_fraction) *
                                    (double(t) / double(config.ramp_epochs)));
    }
    const auto k = static_cast<std::int64_t>(
        std::floor(share * static_cast<double>(num_edges)));
    schedule.admitted_per_epoch.push_back(std::max<std::int64_t>(1, k));
  }
  return schedule;
}

}  // namespace sga
