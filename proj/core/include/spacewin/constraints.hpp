#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spacewin/model.hpp"

namespace spacewin {

// Phase-1 state: the cluster the shuttle is at plus the visited set.
struct SystemState {
  ClusterIndex at = kDepot;
  std::uint32_t visited = 0;  // bit i set once cluster i has been served

  int entropy() const { return std::popcount(visited); }
  bool consistent() const {
    return at == kDepot ? visited == 0 : ((visited >> at) & 1U) != 0;
  }
  bool terminal(int cluster_count) const { return entropy() == cluster_count; }

  friend bool operator==(const SystemState&, const SystemState&) = default;
};

struct Violation {
  enum class Kind { Structure, Legitimacy, Capacity, PickupShift, DropoffShift };
  Kind kind = Kind::Structure;
  PassengerId passenger = 0;  // for legitimacy and shift violations
  int position = 0;           // 1-based stop position, when relevant

  std::string describe() const;
};

// Definitional check of a whole visit order against legitimacy, capacity and
// MPS. Returns an empty list when the order is feasible.
std::vector<Violation> check_sequence(std::span<const ClusterIndex> sequence,
                                      const Scenario& scenario);

// Incremental screens precomputed per cluster: the pickups a cluster needs
// first, and the window of prior pickup/drop-off counts its events tolerate.
class SequenceRules {
 public:
  explicit SequenceRules(const Scenario& scenario);

  int cluster_count() const { return static_cast<int>(required_.size()); }

  // Cluster `next` is unvisited and every pickup it depends on is done.
  bool can_visit(std::uint32_t visited, ClusterIndex next) const {
    return ((visited >> next) & 1U) == 0 && (required_[next] & ~visited) == 0;
  }
  // Capacity and MPS after serving `at`, with `visited` including `at`.
  bool state_ok(std::uint32_t visited, ClusterIndex at) const;

  int load(std::uint32_t visited) const;
  int picked(std::uint32_t visited) const;

 private:
  std::vector<std::uint32_t> required_;
  std::vector<int> net_;
  std::vector<int> pickups_;
  std::vector<int> dropoffs_;
  std::vector<int> pickup_lo_, pickup_hi_;
  std::vector<int> dropoff_lo_, dropoff_hi_;
  int initial_load_ = 0;
  int capacity_ = 0;
};

bool state_feasible(const SystemState& s, const Scenario& scenario);
std::vector<SystemState> feasible_next_states(const SystemState& s, const Scenario& scenario);

struct StopSlack {
  int position = 0;              // 1-based
  ClusterIndex cluster = 0;
  double ready_time = 0.0;       // last walker arrives (plan start if none)
  double slack = 0.0;            // departure minus ready time
  double required_wait = 0.0;    // max(0, -slack)
};

// Compares each stop's departure with the arrival of its walking passengers.
std::vector<StopSlack> check_departures(const Route& route, const Scenario& scenario);

}  // namespace spacewin
