#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "spacewin/model.hpp"

namespace spacewin {

struct IterationRecord {
  int h = 0;
  std::vector<ClusterIndex> sequence;
  double sequence_cost = 0.0;   // phase-1 objective at the previous points
  double cost = 0.0;            // full cost after placement (unset when repeated)
  bool repeated = false;
  bool retained = false;        // phase 1 proposal lost to the previous order
  bool placement_converged = true;
  int placer_iterations = 0;
};

enum class Termination { recurrence, iteration_cap };

std::string_view to_string(Termination t);

struct SolveResult {
  double cost = 0.0;
  std::vector<ClusterIndex> sequence;
  std::vector<Point> points;   // by cluster index
  Route route;
  std::vector<IterationRecord> history;
  int hbar = 0;
  Termination termination = Termination::recurrence;
};

struct AltMinOptions {
  std::optional<int> h_max;
  std::optional<std::vector<Point>> initial_points;  // by cluster index
};

// Alternates exact sequencing at fixed points with placement at a fixed
// order, starting from area centroids, until an order repeats.
SolveResult solve(const Scenario& scenario, const AltMinOptions& options = {});

// (altmin - exact) / exact; negative when the heuristic beat the reference.
double optimality_gap(double altmin_cost, double oracle_cost);

}  // namespace spacewin
