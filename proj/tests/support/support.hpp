#pragma once
// Shared fixtures and independent reference computations for the tests.
// Nothing here calls into the solver modules it is used to check.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <vector>

#include "spacewin/generator.hpp"
#include "spacewin/model.hpp"

namespace spacewin::testing {

inline RideRequest request(PassengerId id, Point p, Point d, double rp = 0.0, double rd = 0.0,
                           double t = 0.0) {
  RideRequest r;
  r.id = id;
  r.pickup = p;
  r.dropoff = d;
  r.pickup_radius = rp;
  r.dropoff_radius = rd;
  r.request_time = t;
  return r;
}

// Unit speeds, no stop overhead, shuttle time only.
inline ScenarioData plain_data() {
  ScenarioData d;
  d.vehicle.shuttle_speed = 1.0;
  d.vehicle.walk_speed = 1.0;
  d.vehicle.service_time = 0.0;
  d.vehicle.acceleration = std::numeric_limits<double>::infinity();
  d.config.gamma1 = 1.0;
  d.config.gamma2 = 0.0;
  return d;
}

// n random requests in a square of side `box`, endpoints far enough apart
// that walking never dominates.
inline ScenarioData random_data(UniformSource& rng, int n, double box, double radius) {
  ScenarioData d;
  d.depot = {rng.between(0, box), rng.between(0, box)};
  for (int k = 1; k <= n; ++k) {
    RideRequest r;
    r.id = k;
    r.pickup = {rng.between(0, box), rng.between(0, box)};
    do {
      r.dropoff = {rng.between(0, box), rng.between(0, box)};
    } while (std::hypot(r.dropoff.x - r.pickup.x, r.dropoff.y - r.pickup.y) <= 2 * radius);
    r.pickup_radius = radius;
    r.dropoff_radius = radius;
    d.requests.push_back(r);
  }
  return d;
}

// Cluster -> events lookup, independent of Scenario's tables.
struct PatternView {
  std::vector<std::vector<Event>> clusters;
  std::map<PassengerId, int> pickup_of, dropoff_of;
  std::map<PassengerId, const RideRequest*> request_of;

  explicit PatternView(const ScenarioData& d) {
    ClusteringPattern p = d.pattern ? *d.pattern : ClusteringPattern::trivial(d.requests);
    for (int i = 0; i < static_cast<int>(p.clusters.size()); ++i) {
      clusters.push_back(p.clusters[i].events);
      for (const auto& e : p.clusters[i].events) {
        (e.kind == EventKind::pickup ? pickup_of : dropoff_of)[e.passenger] = i;
      }
    }
    for (const auto& r : d.requests) {
      request_of[r.id] = &r;
    }
  }
  int size() const { return static_cast<int>(clusters.size()); }
};

// Legitimacy, capacity and position-shift rules, evaluated by direct
// simulation of the visit order.
inline bool order_feasible(const ScenarioData& d, const PatternView& v, const std::vector<int>& order) {
  std::vector<int> pos(v.size());
  for (int j = 0; j < v.size(); ++j) {
    pos[order[j]] = j;
  }
  int load = static_cast<int>(d.onboard.size());
  int picked = d.pickups_done;
  int dropped = d.dropoffs_done;
  for (int j = 0; j < v.size(); ++j) {
    int up = 0;
    int down = 0;
    for (const auto& e : v.clusters[order[j]]) {
      if (e.kind == EventKind::pickup) {
        if (pos[v.dropoff_of.at(e.passenger)] < j) {
          return false;
        }
        if (std::abs(picked + 1 - e.passenger) > d.config.mps_pickup) {
          return false;
        }
        ++up;
      } else {
        if (v.pickup_of.count(e.passenger) && pos[v.pickup_of.at(e.passenger)] > j) {
          return false;
        }
        if (std::abs(dropped + 1 - e.passenger) > d.config.mps_dropoff) {
          return false;
        }
        ++down;
      }
    }
    picked += up;
    dropped += down;
    load += up - down;
    if (load > d.config.capacity || load < 0) {
      return false;
    }
  }
  return true;
}

// Objective of a visit order at fixed points (by cluster), straight from the
// weighted sum of shuttle, waiting, riding and walking times. Departures do
// not wait for walkers.
inline double direct_cost(const ScenarioData& d, const PatternView& v, const std::vector<int>& order,
                          const std::vector<Point>& points) {
  const double ta = d.vehicle.service_time + d.vehicle.shuttle_speed / (2.0 * d.vehicle.acceleration);
  std::vector<double> departure(v.size());
  double t = d.start_time;
  Point prev = d.depot;
  double shuttle = 0.0;
  for (int c : order) {
    const double seg = std::hypot(points[c].x - prev.x, points[c].y - prev.y) / d.vehicle.shuttle_speed + ta;
    t += seg;
    shuttle += seg;
    departure[c] = t;
    prev = points[c];
  }
  double wait = 0.0, ride = 0.0, walk_p = 0.0, walk_d = 0.0;
  for (const auto& r : d.requests) {
    const int pc = v.pickup_of.at(r.id);
    const int dc = v.dropoff_of.at(r.id);
    wait += departure[pc] - r.request_time;
    ride += departure[dc] - departure[pc];
    walk_p += std::hypot(points[pc].x - r.pickup.x, points[pc].y - r.pickup.y) / d.vehicle.walk_speed;
    walk_d += std::hypot(points[dc].x - r.dropoff.x, points[dc].y - r.dropoff.y) / d.vehicle.walk_speed;
  }
  const auto& c = d.config;
  return c.gamma1 * shuttle +
         c.gamma2 * (c.alpha1 * wait + c.alpha2 * ride + c.alpha3_pickup * walk_p + c.alpha3_dropoff * walk_d);
}

struct BruteOrder {
  double cost = std::numeric_limits<double>::infinity();
  std::vector<int> order;
  int feasible = 0;
};

// Every permutation of the clusters, filtered by order_feasible.
inline BruteOrder brute_order(const ScenarioData& d, const std::vector<Point>& points) {
  const PatternView v(d);
  std::vector<int> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  BruteOrder best;
  do {
    if (!order_feasible(d, v, order)) {
      continue;
    }
    ++best.feasible;
    const double c = direct_cost(d, v, order, points);
    if (c < best.cost) {
      best.cost = c;
      best.order = order;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

inline bool near(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace spacewin::testing
