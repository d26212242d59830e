#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spacewin/error.hpp"
#include "spacewin/geometry.hpp"

namespace spacewin {

// Absolute request order k (1-based, increasing with request time).
using PassengerId = int;
// 0-based position of a cluster inside ClusteringPattern::clusters. The
// cluster's external id is index + 1; id 0 is the depot.
using ClusterIndex = int;

inline constexpr ClusterIndex kDepot = -1;

enum class EventKind : std::uint8_t { pickup, dropoff };

struct Event {
  EventKind kind = EventKind::pickup;
  PassengerId passenger = 0;

  friend auto operator<=>(const Event&, const Event&) = default;
};

// "p3" / "d1" style references used by the scenario format.
std::string event_ref(const Event& e);
std::optional<Event> parse_event_ref(std::string_view ref);

struct RideRequest {
  PassengerId id = 0;
  Point pickup;
  Point dropoff;
  double pickup_radius = 0.0;
  double dropoff_radius = 0.0;
  double request_time = 0.0;
  // Set once a pickup point has been promised; the pickup window collapses to
  // this point while walking costs are still measured from `pickup`.
  std::optional<Point> frozen_pickup;

  SpaceWindow pickup_window() const {
    return frozen_pickup ? SpaceWindow{*frozen_pickup, 0.0} : SpaceWindow{pickup, pickup_radius};
  }
  SpaceWindow dropoff_window() const { return {dropoff, dropoff_radius}; }
};

struct Cluster {
  std::vector<Event> events;
};

struct ClusterLoads {
  int pickups = 0;
  int dropoffs = 0;

  int net() const { return pickups - dropoffs; }
};

struct ClusteringPattern {
  std::vector<Cluster> clusters;

  std::size_t size() const { return clusters.size(); }

  // One event per cluster, ordered p1, d1, p2, d2, ... Passengers listed in
  // `onboard` only contribute their drop-off.
  static ClusteringPattern trivial(std::span<const RideRequest> requests,
                                   std::span<const PassengerId> onboard = {});
};

std::vector<ClusterLoads> cluster_loads(const ClusteringPattern& pattern);

struct VehicleParams {
  double shuttle_speed = 13.4112;   // m/s (30 mph)
  double walk_speed = 1.38582;      // m/s (3.1 mph)
  double service_time = 60.0;       // s
  double acceleration = 1.00584;    // m/s^2 (2.25 mph/s); +inf disables the correction

  // Per-stop overhead t_a: service time plus the acceleration correction.
  double stop_overhead() const { return service_time + shuttle_speed / (2.0 * acceleration); }
};

struct SolverConfig {
  double gamma1 = 1.0;
  double gamma2 = 0.0;
  double alpha1 = 2.0;
  double alpha2 = 1.0;
  double alpha3_pickup = 0.1;
  double alpha3_dropoff = 0.1;
  int capacity = 6;
  int mps_pickup = 6;
  int mps_dropoff = 6;
  int h_max = 50;
  double eps_place = 1e-4;
  double eps_geom = kGeomEps;
  int max_placer_iterations = 50000;
  int max_clusters = 24;
};

// A passenger already aboard when a plan starts. The pickup is history:
// its waiting and walking times are sunk constants.
struct OnboardPassenger {
  PassengerId id = 0;
  double pickup_time = 0.0;
  double pickup_walk_time = 0.0;
  int pickup_position = 0;
};

// Longitude/latitude of the local origin when the input used lon/lat.
struct GeoReference {
  double lon0 = 0.0;
  double lat0 = 0.0;
};

// Unvalidated scenario contents, as parsed or assembled by callers.
struct ScenarioData {
  Point depot;
  double start_time = 0.0;
  std::vector<RideRequest> requests;
  std::optional<ClusteringPattern> pattern;
  VehicleParams vehicle;
  SolverConfig config;
  std::vector<OnboardPassenger> onboard;
  int pickups_done = 0;   // absolute pickups finished before this plan
  int dropoffs_done = 0;  // absolute drop-offs finished before this plan
  std::optional<GeoReference> geo;
};

// A validated, immutable routing instance with derived lookup tables.
class Scenario {
 public:
  const ScenarioData& data() const { return data_; }

  Point depot() const { return data_.depot; }
  double start_time() const { return data_.start_time; }
  std::span<const RideRequest> requests() const { return data_.requests; }
  const ClusteringPattern& pattern() const { return *data_.pattern; }
  const VehicleParams& vehicle() const { return data_.vehicle; }
  const SolverConfig& config() const { return data_.config; }
  std::span<const OnboardPassenger> onboard() const { return data_.onboard; }
  int pickups_done() const { return data_.pickups_done; }
  int dropoffs_done() const { return data_.dropoffs_done; }

  int cluster_count() const { return static_cast<int>(data_.pattern->size()); }
  int passenger_count() const { return static_cast<int>(data_.requests.size()); }
  double stop_overhead() const { return data_.vehicle.stop_overhead(); }

  const Area& area(ClusterIndex i) const { return areas_[i]; }
  std::span<const Area> areas() const { return areas_; }
  const ClusterLoads& loads(ClusterIndex i) const { return loads_[i]; }
  std::span<const ClusterLoads> loads() const { return loads_; }

  // Index into requests() for a passenger id, or -1.
  int slot_of(PassengerId id) const;
  // Cluster holding the passenger's pickup; kDepot when already aboard.
  ClusterIndex pickup_cluster(int slot) const { return pickup_cluster_[slot]; }
  ClusterIndex dropoff_cluster(int slot) const { return dropoff_cluster_[slot]; }
  std::span<const int> cluster_pickups(ClusterIndex i) const { return cluster_pickups_[i]; }
  std::span<const int> cluster_dropoffs(ClusterIndex i) const { return cluster_dropoffs_[i]; }
  // Onboard record for a slot, if the passenger started the plan aboard.
  const OnboardPassenger* onboard_record(int slot) const;
  int pending_pickups() const { return pending_pickups_; }

 private:
  friend Scenario validate_scenario(ScenarioData data);

  ScenarioData data_;
  std::vector<Area> areas_;
  std::vector<ClusterLoads> loads_;
  std::vector<int> slot_by_id_;
  std::vector<ClusterIndex> pickup_cluster_;
  std::vector<ClusterIndex> dropoff_cluster_;
  std::vector<std::vector<int>> cluster_pickups_;
  std::vector<std::vector<int>> cluster_dropoffs_;
  std::vector<int> onboard_index_;
  int pending_pickups_ = 0;
};

// Checks every invariant of the instance and builds the lookup tables.
// Synthesizes the trivial pattern when none is given. Throws ValidationError
// listing all violations.
Scenario validate_scenario(ScenarioData data);

struct PassengerTimes {
  PassengerId id = 0;
  double wait = 0.0;
  double ride = 0.0;
  double walk_pickup = 0.0;
  double walk_dropoff = 0.0;
  double pickup_time = 0.0;   // departure from the pickup stop
  double dropoff_time = 0.0;  // departure from the drop-off stop
  int pickup_position = 0;    // absolute queue order p_k
  int dropoff_position = 0;   // absolute queue order d_k
};

struct CostBreakdown {
  double total = 0.0;
  double shuttle = 0.0;       // sum of segment times plus stop overheads
  double wait = 0.0;
  double ride = 0.0;
  double walk_pickup = 0.0;
  double walk_dropoff = 0.0;
};

// A timed visit plan. Segment j (1-based in prose, 0-based here) runs from the
// previous stop to sequence[j]; its time includes any wait for walkers, and
// the stop overhead is added on top.
struct Route {
  std::vector<ClusterIndex> sequence;
  std::vector<Point> routing_points;   // by cluster index
  Point start;
  double start_time = 0.0;
  std::vector<double> travel_times;    // by position
  std::vector<double> waits;           // by position
  std::vector<double> segment_times;   // travel + wait, by position
  std::vector<double> departure_times; // by position
  std::vector<PassengerTimes> passengers;  // by request slot
  CostBreakdown cost;

  // 1-based visit position of each cluster (the inverse of `sequence`).
  std::vector<int> positions() const;
};

}  // namespace spacewin
