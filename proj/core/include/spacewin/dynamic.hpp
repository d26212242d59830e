#pragma once

#include <optional>
#include <span>
#include <vector>

#include "spacewin/altmin.hpp"
#include "spacewin/model.hpp"

namespace spacewin {

struct ExecutedStop {
  Point point;
  double arrival = 0.0;
  double departure = 0.0;
  std::vector<Event> events;
};

struct AssignedPickup {
  PassengerId id = 0;
  Point point;   // promised pickup point
};

// State of the shuttle and its passengers at a wall-clock instant. A stop
// is committed once the shuttle reaches it; a plan resumes from `position`
// at `ready_time` (the committed stop's departure, or `time` mid-segment).
struct FleetSnapshot {
  double time = 0.0;
  Point position;
  double ready_time = 0.0;
  std::vector<ExecutedStop> executed;          // committed stops of this route
  std::vector<OnboardPassenger> onboard;
  std::vector<AssignedPickup> assigned;        // promised but not picked up
  std::vector<PassengerId> served;
  std::vector<ClusterIndex> remaining;         // uncommitted clusters, visit order
  int requests_so_far = 0;
  int pickups_done = 0;
  int dropoffs_done = 0;
};

FleetSnapshot snapshot_at(const Route& route, const Scenario& scenario, double now);

struct ReplanResult {
  Scenario scenario;     // derived instance for the remaining work
  SolveResult solution;
};

// Clusters for the remaining work: unserved clusters of the current plan
// (minus events `fragment` regroups), then `fragment`, then one cluster per
// event still uncovered.
ClusteringPattern merge_pattern(const FleetSnapshot& snapshot, const Scenario& scenario,
                                std::span<const RideRequest> new_requests,
                                const std::optional<ClusteringPattern>& fragment);

// Builds the derived instance (start at the snapshot, onboard passengers as
// sunk pickups, promised pickups frozen, absolute counters) and solves it.
// `pattern_update` must cover every unserved event; the trivial pattern is
// used when it is absent.
ReplanResult replan(const FleetSnapshot& snapshot, std::span<const RideRequest> new_requests,
                    const std::optional<ClusteringPattern>& pattern_update,
                    const Scenario& scenario, const AltMinOptions& options = {});

struct RealizedPassenger {
  PassengerId id = 0;
  Point pickup_point;
  Point dropoff_point;
  double pickup_time = 0.0;
  double dropoff_time = 0.0;
  PassengerTimes times;
};

struct RealizedPlan {
  std::vector<ExecutedStop> stops;
  std::vector<RealizedPassenger> passengers;   // by id
  CostBreakdown cost;
};

// Serves batches of requests with one shuttle, replanning at each arrival.
class Dispatcher {
 public:
  explicit Dispatcher(const Scenario& initial, AltMinOptions options = {});

  const ReplanResult& current() const { return plans_.back(); }
  std::span<const ReplanResult> plans() const { return plans_; }
  double plan_start() const { return plan_start_; }

  // Replans at `time` for `requests`; `fragment` groups the new events (and
  // may regroup unserved ones).
  const ReplanResult& add_batch(double time, std::vector<RideRequest> requests,
                                const std::optional<ClusteringPattern>& fragment = std::nullopt);

  // Runs the current plan to completion and prices what actually happened.
  RealizedPlan finish();

 private:
  void commit(const FleetSnapshot& snapshot);

  AltMinOptions options_;
  std::vector<ReplanResult> plans_;
  std::vector<RideRequest> all_requests_;
  std::vector<ExecutedStop> stops_;
  double busy_time_ = 0.0;
  double plan_start_ = 0.0;
};

struct SequentialResult {
  std::vector<SolveResult> solutions;
  double cost = 0.0;
};

// Reference policy: each batch waits until the previous one is fully served
// and is then solved as a fresh static instance from the last stop.
SequentialResult serve_sequentially(const Scenario& initial,
                                    std::span<const std::pair<double, std::vector<RideRequest>>> batches,
                                    const AltMinOptions& options = {});

}  // namespace spacewin
