#include "spacewin/cost.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace spacewin {

std::vector<double> segment_weights(const Scenario& scenario,
                                    std::span<const ClusterIndex> sequence) {
  const auto& cfg = scenario.config();
  std::vector<double> out;
  out.reserve(sequence.size());
  int waiting = scenario.pending_pickups();
  int aboard = static_cast<int>(scenario.onboard().size());
  for (ClusterIndex c : sequence) {
    out.push_back(cfg.gamma1 + cfg.gamma2 * (cfg.alpha1 * waiting + cfg.alpha2 * aboard));
    waiting -= scenario.loads(c).pickups;
    aboard += scenario.loads(c).net();
  }
  return out;
}

WaitPlan plan_waits(std::span<const double> weights, std::span<const double> need) {
  const std::size_t n = weights.size();
  WaitPlan plan;
  plan.waits.assign(n, 0.0);
  plan.need_weights.assign(n, 0.0);

  std::vector<double> cheap(n + 1, 0.0);
  std::vector<int> binding(n, -1);
  std::size_t best = 0;
  double covered = 0.0;
  int arg = -1;
  for (std::size_t p = 0; p < n; ++p) {
    if (weights[p] <= weights[best]) {
      best = p;
    }
    cheap[p] = weights[best];
    if (need[p] > covered) {
      const double extra = need[p] - covered;
      plan.waits[best] += extra;
      plan.cost += weights[best] * extra;
      covered = need[p];
      arg = static_cast<int>(p);
    }
    binding[p] = arg;
  }
  // cost = sum_p (cheap_p - cheap_{p+1}) * covered_p, covered_p = need[binding_p].
  for (std::size_t p = 0; p < n; ++p) {
    if (binding[p] >= 0) {
      plan.need_weights[binding[p]] += cheap[p] - cheap[p + 1];
    }
  }
  return plan;
}

Route time_route(const Scenario& scenario, std::span<const ClusterIndex> sequence,
                 std::span<const Point> points, Departures departures) {
  const auto& vehicle = scenario.vehicle();
  const double ta = scenario.stop_overhead();
  const auto requests = scenario.requests();
  const std::size_t n = sequence.size();

  Route route;
  route.sequence.assign(sequence.begin(), sequence.end());
  route.routing_points.assign(points.begin(), points.end());
  route.start = scenario.depot();
  route.start_time = scenario.start_time();
  route.travel_times.resize(n);
  route.waits.assign(n, 0.0);

  Point prev = route.start;
  for (std::size_t j = 0; j < n; ++j) {
    const Point here = points[sequence[j]];
    route.travel_times[j] = distance(prev, here) / vehicle.shuttle_speed;
    prev = here;
  }

  if (departures == Departures::enforce) {
    std::vector<double> need(n, -std::numeric_limits<double>::infinity());
    double base = route.start_time;
    for (std::size_t j = 0; j < n; ++j) {
      base += route.travel_times[j] + ta;
      const ClusterIndex c = sequence[j];
      for (int k : scenario.cluster_pickups(c)) {
        const double ready =
            requests[k].request_time + distance(points[c], requests[k].pickup) / vehicle.walk_speed;
        need[j] = std::max(need[j], ready - base);
      }
    }
    route.waits = plan_waits(segment_weights(scenario, sequence), need).waits;
  }

  route.segment_times.resize(n);
  route.departure_times.resize(n);
  double t = route.start_time;
  for (std::size_t j = 0; j < n; ++j) {
    route.segment_times[j] = route.travel_times[j] + route.waits[j];
    t = t + route.segment_times[j] + ta;
    route.departure_times[j] = t;
  }
  route.cost = evaluate_cost(route, scenario);

  // Per-passenger view, recomputed the same way evaluate_cost does.
  const auto pos = route.positions();
  std::vector<int> pickup_order(n), dropoff_order(n);
  int picked = scenario.pickups_done();
  int dropped = scenario.dropoffs_done();
  for (ClusterIndex c : sequence) {
    pickup_order[c] = picked + 1;
    dropoff_order[c] = dropped + 1;
    picked += scenario.loads(c).pickups;
    dropped += scenario.loads(c).dropoffs;
  }
  route.passengers.resize(requests.size());
  for (std::size_t k = 0; k < requests.size(); ++k) {
    const auto& r = requests[k];
    auto& pt = route.passengers[k];
    pt.id = r.id;
    const ClusterIndex dc = scenario.dropoff_cluster(static_cast<int>(k));
    if (const auto* ob = scenario.onboard_record(static_cast<int>(k))) {
      pt.pickup_time = ob->pickup_time;
      pt.walk_pickup = ob->pickup_walk_time;
      pt.pickup_position = ob->pickup_position;
    } else {
      const ClusterIndex pc = scenario.pickup_cluster(static_cast<int>(k));
      pt.pickup_time = route.departure_times[pos[pc] - 1];
      pt.walk_pickup = distance(points[pc], r.pickup) / vehicle.walk_speed;
      pt.pickup_position = pickup_order[pc];
    }
    pt.dropoff_time = route.departure_times[pos[dc] - 1];
    pt.walk_dropoff = distance(points[dc], r.dropoff) / vehicle.walk_speed;
    pt.dropoff_position = dropoff_order[dc];
    pt.wait = pt.pickup_time - r.request_time;
    pt.ride = pt.dropoff_time - pt.pickup_time;
  }
  return route;
}

namespace {

bool close(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

[[noreturn]] void inconsistent(const std::string& what) {
  throw Error(ErrorCode::InconsistentTimings, what);
}

}  // namespace

CostBreakdown evaluate_cost(const Route& route, const Scenario& scenario) {
  const int num_clusters = scenario.cluster_count();
  const std::size_t n = route.sequence.size();
  if (static_cast<int>(n) != num_clusters ||
      static_cast<int>(route.routing_points.size()) != num_clusters ||
      route.segment_times.size() != n || route.departure_times.size() != n) {
    inconsistent("route dimensions do not match the clustering pattern");
  }
  std::vector<int> pos(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    const ClusterIndex c = route.sequence[j];
    if (c < 0 || c >= num_clusters || pos[c] != 0) {
      inconsistent("sequence is not a permutation of the clusters");
    }
    pos[c] = static_cast<int>(j) + 1;
  }

  const auto& vehicle = scenario.vehicle();
  const auto& cfg = scenario.config();
  const double ta = scenario.stop_overhead();

  CostBreakdown out;
  Point prev = route.start;
  double t = route.start_time;
  for (std::size_t j = 0; j < n; ++j) {
    const Point here = route.routing_points[route.sequence[j]];
    const double travel = distance(prev, here) / vehicle.shuttle_speed;
    if (route.segment_times[j] < travel && !close(route.segment_times[j], travel)) {
      inconsistent(fmt::format("segment {} is shorter than its travel time", j + 1));
    }
    t = t + route.segment_times[j] + ta;
    if (!close(route.departure_times[j], t)) {
      inconsistent(fmt::format("departure {} does not follow from the segment times", j + 1));
    }
    out.shuttle += route.segment_times[j] + ta;
    prev = here;
  }

  const auto requests = scenario.requests();
  for (std::size_t k = 0; k < requests.size(); ++k) {
    const auto& r = requests[k];
    const int slot = static_cast<int>(k);
    double pickup_time = 0.0;
    if (const auto* ob = scenario.onboard_record(slot)) {
      pickup_time = ob->pickup_time;
      out.walk_pickup += ob->pickup_walk_time;
    } else {
      const ClusterIndex pc = scenario.pickup_cluster(slot);
      pickup_time = route.departure_times[pos[pc] - 1];
      out.walk_pickup += distance(route.routing_points[pc], r.pickup) / vehicle.walk_speed;
    }
    const ClusterIndex dc = scenario.dropoff_cluster(slot);
    out.walk_dropoff += distance(route.routing_points[dc], r.dropoff) / vehicle.walk_speed;
    out.wait += pickup_time - r.request_time;
    out.ride += route.departure_times[pos[dc] - 1] - pickup_time;
  }

  out.total = cfg.gamma1 * out.shuttle +
              cfg.gamma2 * (cfg.alpha1 * out.wait + cfg.alpha2 * out.ride +
                            cfg.alpha3_pickup * out.walk_pickup +
                            cfg.alpha3_dropoff * out.walk_dropoff);
  return out;
}

double sequence_independent_cost(const Scenario& scenario, std::span<const Point> points) {
  const auto& cfg = scenario.config();
  const double vp = scenario.vehicle().walk_speed;
  const double t0 = scenario.start_time();
  const auto requests = scenario.requests();
  double walk = 0.0;
  double sunk = 0.0;
  for (std::size_t k = 0; k < requests.size(); ++k) {
    const auto& r = requests[k];
    const int slot = static_cast<int>(k);
    if (const auto* ob = scenario.onboard_record(slot)) {
      walk += cfg.alpha3_pickup * ob->pickup_walk_time;
      sunk += cfg.alpha1 * (ob->pickup_time - r.request_time) +
              cfg.alpha2 * (t0 - ob->pickup_time);
    } else {
      walk += cfg.alpha3_pickup * distance(points[scenario.pickup_cluster(slot)], r.pickup) / vp;
      sunk += cfg.alpha1 * (t0 - r.request_time);
    }
    walk += cfg.alpha3_dropoff * distance(points[scenario.dropoff_cluster(slot)], r.dropoff) / vp;
  }
  return cfg.gamma2 * (walk + sunk);
}

}  // namespace spacewin
