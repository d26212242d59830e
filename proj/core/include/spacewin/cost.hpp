#pragma once

#include <span>
#include <vector>

#include "spacewin/model.hpp"

namespace spacewin {

// Whether shuttle departures wait for walking passengers. Phase 1 ignores
// them, as its recurrence does; everything else enforces them.
enum class Departures { enforce, ignore };

// Segment multipliers M_j = gamma1 + gamma2 (alpha1 g1_j + alpha2 g2_j) by
// position, where g1 counts passengers still waiting and g2 those aboard
// while segment j is driven.
std::vector<double> segment_weights(const Scenario& scenario,
                                    std::span<const ClusterIndex> sequence);

// Cheapest shuttle waits that let every walker board.
struct WaitPlan {
  std::vector<double> waits;         // by position
  double cost = 0.0;                 // sum of weights[j] * waits[j]
  std::vector<double> need_weights;  // d cost / d need_q (a subgradient)
};

// `need[q]` is how much later stop q must depart than it would without any
// waiting (-inf when nobody walks to it). Cumulative waits up to q must cover
// need[q]; each increment is charged to the cheapest segment at or before q.
WaitPlan plan_waits(std::span<const double> weights, std::span<const double> need);

// Builds a timed route for a visit order and routing points (by cluster
// index), then prices it with evaluate_cost.
Route time_route(const Scenario& scenario, std::span<const ClusterIndex> sequence,
                 std::span<const Point> points, Departures departures = Departures::enforce);

// Re-derives every passenger time from the route's timeline and prices it.
// Throws InconsistentTimings when the timeline contradicts the geometry.
CostBreakdown evaluate_cost(const Route& route, const Scenario& scenario);

// Terms that do not depend on the visit order: walking, plus time already
// spent by passengers before the plan starts.
double sequence_independent_cost(const Scenario& scenario, std::span<const Point> points);

}  // namespace spacewin
