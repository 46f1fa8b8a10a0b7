#include <doctest.h>

#include <sga/curriculum.hpp>
#include <sga/graph.hpp>

#include <random>
#include <stdexcept>

#include "helpers.hpp"

using sga::CurriculumConfig;
using sga::SignedGraph;

TEST_SUITE("curriculum") {

TEST_CASE("difficulty on a hand-checked graph") {
  // balanced triangle 0-1-2, unbalanced triangle 2-3-4
  const SignedGraph g(5, {{0, 1, 1},
                          {0, 2, 1},
                          {1, 2, 1},
                          {2, 3, 1},
                          {2, 4, -1},
                          {3, 4, 1}});
  // local balance: nodes 0,1 -> +1; node 2 -> 0; nodes 3,4 -> -1
  const auto d = sga::edge_difficulty(g);
  REQUIRE_EQ(d.size(), 6);
  CHECK_EQ(d[0], doctest::Approx(0.0));    // (0,1), both endpoints clean
  CHECK_EQ(d[1], doctest::Approx(0.25));   // (0,2)
  CHECK_EQ(d[2], doctest::Approx(0.25));   // (1,2)
  CHECK_EQ(d[3], doctest::Approx(0.75));   // (2,3)
  CHECK_EQ(d[4], doctest::Approx(0.75));   // (2,4)
  CHECK_EQ(d[5], doctest::Approx(1.0));    // (3,4), both endpoints all-sour
}

TEST_CASE("difficulty stays inside the unit interval") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 6 + int(rng() % 10);
    const SignedGraph g(n, testutil::random_edges(n, 0.4, rng));
    for (const double d : sga::edge_difficulty(g)) {
      CHECK_GE(d, 0.0);
      CHECK_LE(d, 1.0);
    }
  }
}

TEST_CASE("schedule orders easy edges first and ramps linearly") {
  const SignedGraph g(5, {{0, 1, 1},
                          {0, 2, 1},
                          {1, 2, 1},
                          {2, 3, 1},
                          {2, 4, -1},
                          {3, 4, 1}});
  CurriculumConfig cfg;
  cfg.start_fraction = 0.5;
  cfg.ramp_epochs = 4;
  const auto s = sga::make_curriculum_schedule(g, cfg, 6);

  // difficulty ties keep canonical order, so the order is the identity here
  REQUIRE_EQ(s.edge_order.size(), 6);
  for (int i = 0; i < 6; ++i) CHECK_EQ(s.edge_order[std::size_t(i)], i);

  REQUIRE_EQ(s.admitted_per_epoch.size(), 6);
  CHECK_EQ(s.admitted_per_epoch[0], 3);  // floor(0.5 * 6)
  CHECK_EQ(s.admitted_per_epoch[1], 3);  // floor(0.625 * 6) = floor(3.75)
  CHECK_EQ(s.admitted_per_epoch[2], 4);  // floor(0.75 * 6)
  CHECK_EQ(s.admitted_per_epoch[3], 5);  // floor(0.875 * 6) = floor(5.25)
  CHECK_EQ(s.admitted_per_epoch[4], 6);
  CHECK_EQ(s.admitted_per_epoch[5], 6);
}

TEST_CASE("schedule admits everything when the ramp is off or done") {
  const SignedGraph g(4, {{0, 1, 1}, {1, 2, -1}, {2, 3, 1}});
  CurriculumConfig cfg;
  cfg.ramp_epochs = 0;
  const auto s = sga::make_curriculum_schedule(g, cfg, 3);
  for (const auto k : s.admitted_per_epoch) CHECK_EQ(k, 3);

  CurriculumConfig full;
  full.start_fraction = 1.0;
  full.ramp_epochs = 10;
  const auto s2 = sga::make_curriculum_schedule(g, full, 5);
  for (const auto k : s2.admitted_per_epoch) CHECK_EQ(k, 3);
}

TEST_CASE("schedule never admits zero edges and never shrinks") {
  std::mt19937_64 rng(7);
  const int n = 14;
  const SignedGraph g(n, testutil::random_edges(n, 0.3, rng));
  CurriculumConfig cfg;
  cfg.start_fraction = 0.001;
  cfg.ramp_epochs = 37;
  const auto s = sga::make_curriculum_schedule(g, cfg, 50);
  const auto num_edges = std::int64_t(g.edges().size());
  std::int64_t prev = 0;
  for (const auto k : s.admitted_per_epoch) {
    CHECK_GE(k, 1);
    CHECK_GE(k, prev);
    CHECK_LE(k, num_edges);
    prev = k;
  }
  CHECK_EQ(s.admitted_per_epoch.back(), num_edges);
}

TEST_CASE("hard edges are admitted last") {
  const SignedGraph g(5, {{0, 1, 1},
                          {0, 2, 1},
                          {1, 2, 1},
                          {2, 3, 1},
                          {2, 4, -1},
                          {3, 4, 1}});
  CurriculumConfig cfg;
  cfg.start_fraction = 0.2;
  cfg.ramp_epochs = 10;
  const auto s = sga::make_curriculum_schedule(g, cfg, 12);
  // the uniquely hardest edge (3,4) sits at the end of the order
  CHECK_EQ(s.edge_order.back(), 5);
  // early epochs admit only the easy balanced-triangle edges
  CHECK_LT(s.admitted_per_epoch[0], 6);
}

TEST_CASE("validation") {
  const SignedGraph g(3, {{0, 1, 1}});
  CurriculumConfig bad;
  bad.start_fraction = 0.0;
  CHECK_THROWS_AS(sga::make_curriculum_schedule(g, bad, 5),
                  std::invalid_argument);
  bad.start_fraction = 1.5;
  CHECK_THROWS_AS(sga::make_curriculum_schedule(g, bad, 5),
                  std::invalid_argument);
  bad = {};
  bad.ramp_epochs = -1;
  CHECK_THROWS_AS(sga::make_curriculum_schedule(g, bad, 5),
                  std::invalid_argument);
  const SignedGraph empty(3, {});
  CHECK_THROWS_AS(sga::make_curriculum_schedule(empty, {}, 5),
                  std::invalid_argument);
}

}  // TEST_SUITE
