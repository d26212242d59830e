#include <numeric>

#include <gtest/gtest.h>

#include "spacewin/altmin.hpp"
#include "spacewin/constraints.hpp"
#include "spacewin/oracle.hpp"
#include "spacewin/placer.hpp"
#include "spacewin/sequencer.hpp"
#include "support.hpp"

namespace spacewin {
namespace {

using testing::plain_data;
using testing::request;

ScenarioData collinear() {
  ScenarioData d = plain_data();
  d.requests.push_back(request(1, {1, 0}, {2, 0}));
  d.requests.push_back(request(2, {3, 0}, {4, 0}));
  return d;
}

TEST(Enumerate, SinglePassenger) {
  ScenarioData d = plain_data();
  d.requests.push_back(request(1, {1, 0}, {2, 0}));
  EXPECT_EQ(enumerate_feasible_sequences(validate_scenario(d)), 1U);
}

TEST(Enumerate, TwoPassengersInterleavings) {
  EXPECT_EQ(enumerate_feasible_sequences(validate_scenario(collinear())), 6U);
  ScenarioData d = collinear();
  d.config.capacity = 1;
  std::vector<std::vector<ClusterIndex>> seen;
  enumerate_feasible_sequences(validate_scenario(d), [&](std::span<const ClusterIndex> s) {
    seen.emplace_back(s.begin(), s.end());
  });
  EXPECT_EQ(seen, (std::vector<std::vector<ClusterIndex>>{{0, 1, 2, 3}, {2, 3, 0, 1}}));
}

TEST(Enumerate, MatchesNaiveFilter) {
  UniformSource rng(70);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 2;
    ScenarioData d = testing::random_data(rng, n, 3000.0, 400.0);
    d.config.capacity = 1 + trial % 3;
    d.config.mps_pickup = 1 + trial % 3;
    d.config.mps_dropoff = 1 + trial % 2;
    if (trial % 2) {
      group_events(d, 2 * n - 1);
    }
    const Scenario s = validate_scenario(d);
    std::vector<ClusterIndex> order(s.cluster_count());
    std::iota(order.begin(), order.end(), 0);
    std::size_t naive = 0;
    do {
      naive += check_sequence(order, s).empty() ? 1 : 0;
    } while (std::next_permutation(order.begin(), order.end()));
    std::size_t listed = enumerate_feasible_sequences(s, [&](std::span<const ClusterIndex> o) {
      EXPECT_TRUE(check_sequence(o, s).empty());
    });
    EXPECT_EQ(listed, naive);
  }
}

TEST(SolveExact, SinglePassengerEqualsPlacer) {
  ScenarioData d = plain_data();
  d.requests.push_back(request(1, {10, 0}, {20, 0}, 1, 1));
  const Scenario s = validate_scenario(d);
  const ExactResult r = solve_exact(s);
  EXPECT_TRUE(r.proven);
  EXPECT_NEAR(r.cost, solve_placement(build_placement(std::vector<ClusterIndex>{0, 1}, s)).cost, 1e-9);
}

TEST(SolveExact, CollinearWithOverhead) {
  ScenarioData d = collinear();
  d.vehicle.service_time = 5.0;
  const ExactResult r = solve_exact(validate_scenario(d));
  EXPECT_NEAR(r.cost, 4.0 + 4 * 5.0, 1e-9);
  EXPECT_EQ(r.sequence, (std::vector<ClusterIndex>{0, 1, 2, 3}));
}

TEST(SolveExact, PruningDoesNotChangeTheOptimum) {
  UniformSource rng(71);
  for (int trial = 0; trial < 5; ++trial) {
    ScenarioData d = testing::random_data(rng, 3, 3200.0, 480.0);
    d.config.gamma2 = trial % 2;
    const Scenario s = validate_scenario(d);
    const ExactResult pruned = solve_exact(s);
    const ExactResult full = solve_exact(s, {3600.0, false});
    EXPECT_TRUE(pruned.proven);
    EXPECT_LE(pruned.placements, full.placements);
    EXPECT_NEAR(pruned.cost, full.cost, 1e-4 * full.cost);
  }
}

TEST(SolveExact, NeverWorseThanAltMinOrSampledOrders) {
  UniformSource rng(72);
  for (int trial = 0; trial < 6; ++trial) {
    ScenarioData d = testing::random_data(rng, 3, 3200.0, 480.0);
    d.config.gamma2 = trial % 2;
    const Scenario s = validate_scenario(d);
    const ExactResult exact = solve_exact(s);
    const SolveResult heuristic = solve(s);
    EXPECT_LE(exact.cost, heuristic.cost * (1.0 + 1e-4));
    std::size_t i = 0;
    enumerate_feasible_sequences(s, [&](std::span<const ClusterIndex> o) {
      if (i++ % 7 == 0) {
        const auto placed = solve_placement(build_placement(o, s));
        EXPECT_LE(exact.cost, placed.cost * (1.0 + 1e-4));
      }
    });
  }
}

TEST(SolveExact, TimeCapIsReported) {
  UniformSource rng(73);
  ScenarioData d = testing::random_data(rng, 5, 3200.0, 480.0);
  const Scenario s = validate_scenario(d);
  try {
    const ExactResult r = solve_exact(s, {1e-9, true});
    EXPECT_FALSE(r.proven);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonConvergence);
  }
}

TEST(BestOrderForPoints, EqualsSequencer) {
  UniformSource rng(74);
  for (int trial = 0; trial < 15; ++trial) {
    ScenarioData d = testing::random_data(rng, 2 + trial % 3, 3000.0, 300.0);
    d.config.gamma2 = trial % 2;
    d.config.capacity = 1 + trial % 2;
    const Scenario s = validate_scenario(d);
    std::vector<Point> pts;
    for (const auto& a : s.areas()) {
      pts.push_back(project_onto_area({rng.between(0, 3000), rng.between(0, 3000)}, a));
    }
    const auto brute = best_order_for_points(s, pts);
    const auto dp = solve_sequence(pts, s);
    EXPECT_TRUE(testing::near(brute.cost, dp.cost, 1e-12));
  }
}

}  // namespace
}  // namespace spacewin
