#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "spacewin/model.hpp"

namespace spacewin {

// Calls `visit` for every visit order that passes the legitimacy, capacity
// and MPS screens, in lexicographic order. Returns how many there were.
std::size_t enumerate_feasible_sequences(
    const Scenario& scenario,
    const std::function<void(std::span<const ClusterIndex>)>& visit = {});

struct ExactOptions {
  double time_cap = 3600.0;   // seconds of wall time
  // Skip subtrees whose cost lower bound (area-to-area distances plus the
  // exact completion value over those distances) cannot beat the incumbent.
  bool prune = true;
};

struct ExactResult {
  double cost = 0.0;
  std::vector<ClusterIndex> sequence;
  std::vector<Point> points;   // by cluster index
  Route route;
  bool proven = false;         // search finished within the time cap
  std::size_t placements = 0;  // orders whose points were optimized
  std::size_t nodes = 0;       // prefixes expanded
  double seconds = 0.0;
};

// Global optimum over all feasible orders with optimal points for each.
// Throws InfeasiblePattern when no order is feasible.
ExactResult solve_exact(const Scenario& scenario, const ExactOptions& options = {});

struct FixedPointsResult {
  double cost = 0.0;
  std::vector<ClusterIndex> sequence;
  std::size_t sequences = 0;
};

// Brute force over feasible orders at fixed points, departures ignored
// (the sequencer's objective).
FixedPointsResult best_order_for_points(const Scenario& scenario, std::span<const Point> points);

}  // namespace spacewin
