#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "spacewin/constraints.hpp"
#include "spacewin/model.hpp"

namespace spacewin {

// M(s) = gamma1 + gamma2 (alpha1 * pickups still pending + alpha2 * load aboard).
double segment_multiplier(const SystemState& s, const Scenario& scenario);

// Stop-to-stop times including the stop overhead. Row 0 is the start point,
// row i + 1 is cluster i; column j is cluster j.
struct EdgeTimes {
  int clusters = 0;
  std::vector<double> values;

  double operator()(ClusterIndex from, ClusterIndex to) const {
    return values[static_cast<std::size_t>(from + 1) * clusters + to];
  }
};

EdgeTimes edge_times(const Scenario& scenario, std::span<const Point> points);

struct ValueEntry {
  SystemState state;
  double value = 0.0;           // +inf when no feasible completion exists
  ClusterIndex next = kDepot;   // best successor, kDepot at terminal states
};

// Value function over every reachable feasible state, grouped by entropy.
class ValueTable {
 public:
  explicit ValueTable(std::vector<std::vector<ValueEntry>> levels) : levels_(std::move(levels)) {}

  int levels() const { return static_cast<int>(levels_.size()); }
  std::span<const ValueEntry> level(int entropy) const { return levels_[entropy]; }
  const ValueEntry* find(const SystemState& s) const;
  std::size_t size() const;

 private:
  std::vector<std::vector<ValueEntry>> levels_;
};

// Backward recursion by decreasing entropy over the states reachable from
// the start. Ties go to the smaller next cluster.
ValueTable build_value_table(const Scenario& scenario, const SequenceRules& rules,
                             const EdgeTimes& edges);

struct SequenceSolution {
  std::vector<ClusterIndex> sequence;
  double cost = 0.0;       // dp_value plus the order-independent terms
  double dp_value = 0.0;   // V at the initial state
  std::size_t states = 0;
};

// Best visit order for fixed routing points (by cluster index). Departure
// waits are not part of this objective. Throws InfeasiblePattern or
// ProblemTooLarge.
SequenceSolution solve_sequence(std::span<const Point> points, const Scenario& scenario);

// Same recursion over arbitrary edge times; the returned cost is the DP value.
SequenceSolution solve_sequence(const EdgeTimes& edges, const Scenario& scenario);

}  // namespace spacewin
