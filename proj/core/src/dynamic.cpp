#include "spacewin/dynamic.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include <fmt/format.h>

#include "spacewin/log.hpp"

namespace spacewin {

FleetSnapshot snapshot_at(const Route& route, const Scenario& scenario, double now) {
  FleetSnapshot snap;
  snap.time = now;
  snap.position = route.start;
  snap.ready_time = std::max(now, route.start_time);
  snap.onboard.assign(scenario.onboard().begin(), scenario.onboard().end());
  snap.pickups_done = scenario.pickups_done();
  snap.dropoffs_done = scenario.dropoffs_done();
  for (const auto& r : scenario.requests()) {
    snap.requests_so_far = std::max(snap.requests_so_far, r.id);
  }

  const auto requests = scenario.requests();
  const double vp = scenario.vehicle().walk_speed;
  double prev_departure = route.start_time;
  Point prev_point = route.start;
  std::size_t j = 0;
  for (; j < route.sequence.size(); ++j) {
    const ClusterIndex c = route.sequence[j];
    const Point here = route.routing_points[c];
    const double arrival = prev_departure + route.travel_times[j];
    if (!(now > arrival)) {
      if (now > prev_departure && route.travel_times[j] > 0.0) {
        const double frac = (now - prev_departure) / route.travel_times[j];
        snap.position = prev_point + frac * (here - prev_point);
        snap.ready_time = now;
      } else {
        snap.position = prev_point;
        snap.ready_time = std::max(now, prev_departure);
      }
      break;
    }

    ExecutedStop stop{here, arrival, route.departure_times[j], scenario.pattern().clusters[c].events};
    for (int k : scenario.cluster_pickups(c)) {
      snap.onboard.push_back({requests[k].id, route.departure_times[j],
                              distance(here, requests[k].pickup) / vp, snap.pickups_done + 1});
    }
    for (int k : scenario.cluster_dropoffs(c)) {
      const PassengerId id = requests[k].id;
      std::erase_if(snap.onboard, [id](const OnboardPassenger& o) { return o.id == id; });
      snap.served.push_back(id);
    }
    snap.pickups_done += scenario.loads(c).pickups;
    snap.dropoffs_done += scenario.loads(c).dropoffs;
    snap.executed.push_back(std::move(stop));
    snap.position = here;
    snap.ready_time = std::max(now, route.departure_times[j]);
    prev_departure = route.departure_times[j];
    prev_point = here;
  }

  for (; j < route.sequence.size(); ++j) {
    const ClusterIndex c = route.sequence[j];
    snap.remaining.push_back(c);
    for (int k : scenario.cluster_pickups(c)) {
      snap.assigned.push_back({requests[k].id, route.routing_points[c]});
    }
  }
  std::sort(snap.assigned.begin(), snap.assigned.end(),
            [](const AssignedPickup& a, const AssignedPickup& b) { return a.id < b.id; });
  return snap;
}

ClusteringPattern merge_pattern(const FleetSnapshot& snapshot, const Scenario& scenario,
                                std::span<const RideRequest> new_requests,
                                const std::optional<ClusteringPattern>& fragment) {
  std::set<Event> regrouped;
  if (fragment) {
    for (const auto& c : fragment->clusters) {
      regrouped.insert(c.events.begin(), c.events.end());
    }
  }
  ClusteringPattern out;
  std::vector<ClusterIndex> remaining = snapshot.remaining;
  std::sort(remaining.begin(), remaining.end());
  for (ClusterIndex c : remaining) {
    Cluster kept;
    for (const auto& e : scenario.pattern().clusters[c].events) {
      if (!regrouped.contains(e)) {
        kept.events.push_back(e);
      }
    }
    if (!kept.events.empty()) {
      out.clusters.push_back(std::move(kept));
    }
  }
  if (fragment) {
    for (const auto& c : fragment->clusters) {
      if (!c.events.empty()) {
        out.clusters.push_back(c);
      }
    }
  }
  for (const auto& r : new_requests) {
    for (EventKind kind : {EventKind::pickup, EventKind::dropoff}) {
      const Event e{kind, r.id};
      if (!regrouped.contains(e)) {
        out.clusters.push_back({{e}});
      }
    }
  }
  return out;
}

ReplanResult replan(const FleetSnapshot& snapshot, std::span<const RideRequest> new_requests,
                    const std::optional<ClusteringPattern>& pattern_update,
                    const Scenario& scenario, const AltMinOptions& options) {
  ScenarioData d;
  d.depot = snapshot.position;
  d.start_time = snapshot.ready_time;
  d.vehicle = scenario.vehicle();
  d.config = scenario.config();
  d.onboard = snapshot.onboard;
  d.pickups_done = snapshot.pickups_done;
  d.dropoffs_done = snapshot.dropoffs_done;
  d.pattern = pattern_update;

  for (const auto& o : snapshot.onboard) {
    d.requests.push_back(scenario.requests()[scenario.slot_of(o.id)]);
  }
  for (const auto& a : snapshot.assigned) {
    RideRequest r = scenario.requests()[scenario.slot_of(a.id)];
    r.frozen_pickup = a.point;
    d.requests.push_back(r);
  }
  for (const auto& r : new_requests) {
    if (r.id <= snapshot.requests_so_far) {
      throw ValidationError({{ErrorCode::InvalidRequestIds,
                              fmt::format("new request {} does not continue the numbering after {}",
                                          r.id, snapshot.requests_so_far)}});
    }
    d.requests.push_back(r);
  }
  std::sort(d.requests.begin(), d.requests.end(),
            [](const RideRequest& a, const RideRequest& b) { return a.id < b.id; });

  ReplanResult out{validate_scenario(std::move(d)), {}};
  out.solution = solve(out.scenario, options);
  return out;
}

Dispatcher::Dispatcher(const Scenario& initial, AltMinOptions options)
  : options_(std::move(options)) {
  plans_.push_back({initial, solve(initial, options_)});
  all_requests_.assign(initial.requests().begin(), initial.requests().end());
  plan_start_ = initial.start_time();
}

void Dispatcher::commit(const FleetSnapshot& snapshot) {
  const Route& route = current().solution.route;
  stops_.insert(stops_.end(), snapshot.executed.begin(), snapshot.executed.end());
  double end = plan_start_;
  if (snapshot.remaining.empty()) {
    if (!route.departure_times.empty()) {
      end = route.departure_times.back();
    }
  } else {
    end = snapshot.ready_time;
  }
  busy_time_ += std::max(0.0, end - plan_start_);
}

const ReplanResult& Dispatcher::add_batch(double time, std::vector<RideRequest> requests,
                                          const std::optional<ClusteringPattern>& fragment) {
  const ReplanResult& cur = current();
  const FleetSnapshot snap = snapshot_at(cur.solution.route, cur.scenario, time);
  const ClusteringPattern pattern = merge_pattern(snap, cur.scenario, requests, fragment);
  ReplanResult next = replan(snap, requests, pattern, cur.scenario, options_);
  commit(snap);
  log::logger()->info("replanned at {:.1f} s: {} stops committed, {} clusters ahead", time,
                      snap.executed.size(), next.scenario.cluster_count());
  all_requests_.insert(all_requests_.end(), requests.begin(), requests.end());
  plan_start_ = snap.ready_time;
  plans_.push_back(std::move(next));
  return plans_.back();
}

RealizedPlan Dispatcher::finish() {
  const ReplanResult& cur = current();
  const FleetSnapshot snap =
      snapshot_at(cur.solution.route, cur.scenario, std::numeric_limits<double>::infinity());
  commit(snap);
  plan_start_ = snap.ready_time;

  RealizedPlan out;
  out.stops = stops_;
  const auto& cfg = cur.scenario.config();
  const double vp = cur.scenario.vehicle().walk_speed;
  std::vector<RideRequest> requests = all_requests_;
  std::sort(requests.begin(), requests.end(),
            [](const RideRequest& a, const RideRequest& b) { return a.id < b.id; });
  out.passengers.resize(requests.size());
  auto slot = [&](PassengerId id) {
    auto it = std::lower_bound(requests.begin(), requests.end(), id,
                               [](const RideRequest& r, PassengerId v) { return r.id < v; });
    return static_cast<std::size_t>(it - requests.begin());
  };

  int picked = 0;
  int dropped = 0;
  for (const auto& stop : stops_) {
    int stop_pickups = 0;
    int stop_dropoffs = 0;
    for (const auto& e : stop.events) {
      auto& p = out.passengers[slot(e.passenger)];
      p.id = e.passenger;
      if (e.kind == EventKind::pickup) {
        p.pickup_point = stop.point;
        p.pickup_time = stop.departure;
        p.times.pickup_position = picked + 1;
        ++stop_pickups;
      } else {
        p.dropoff_point = stop.point;
        p.dropoff_time = stop.departure;
        p.times.dropoff_position = dropped + 1;
        ++stop_dropoffs;
      }
    }
    picked += stop_pickups;
    dropped += stop_dropoffs;
  }

  out.cost.shuttle = busy_time_;
  for (std::size_t k = 0; k < requests.size(); ++k) {
    const auto& r = requests[k];
    auto& p = out.passengers[k];
    p.times.id = r.id;
    p.times.pickup_time = p.pickup_time;
    p.times.dropoff_time = p.dropoff_time;
    p.times.wait = p.pickup_time - r.request_time;
    p.times.ride = p.dropoff_time - p.pickup_time;
    p.times.walk_pickup = distance(p.pickup_point, r.pickup) / vp;
    p.times.walk_dropoff = distance(p.dropoff_point, r.dropoff) / vp;
    out.cost.wait += p.times.wait;
    out.cost.ride += p.times.ride;
    out.cost.walk_pickup += p.times.walk_pickup;
    out.cost.walk_dropoff += p.times.walk_dropoff;
  }
  out.cost.total = cfg.gamma1 * out.cost.shuttle +
                   cfg.gamma2 * (cfg.alpha1 * out.cost.wait + cfg.alpha2 * out.cost.ride +
                                 cfg.alpha3_pickup * out.cost.walk_pickup +
                                 cfg.alpha3_dropoff * out.cost.walk_dropoff);
  return out;
}

SequentialResult serve_sequentially(const Scenario& initial,
                                    std::span<const std::pair<double, std::vector<RideRequest>>> batches,
                                    const AltMinOptions& options) {
  SequentialResult out;
  out.solutions.push_back(solve(initial, options));
  out.cost = out.solutions.back().cost;
  int pickups = initial.pickups_done() + initial.pending_pickups();
  int dropoffs = initial.dropoffs_done() + initial.passenger_count();

  for (const auto& [time, requests] : batches) {
    const Route& last = out.solutions.back().route;
    ScenarioData d;
    d.depot = last.sequence.empty() ? last.start : last.routing_points[last.sequence.back()];
    d.start_time = std::max(time, last.departure_times.empty() ? last.start_time
                                                               : last.departure_times.back());
    d.requests = requests;
    d.vehicle = initial.vehicle();
    d.config = initial.config();
    d.pickups_done = pickups;
    d.dropoffs_done = dropoffs;
    const Scenario s = validate_scenario(std::move(d));
    out.solutions.push_back(solve(s, options));
    out.cost += out.solutions.back().cost;
    pickups += s.pending_pickups();
    dropoffs += s.passenger_count();
  }
  return out;
}

}  // namespace spacewin
