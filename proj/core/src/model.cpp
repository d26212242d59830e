#include "spacewin/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>

#include <fmt/format.h>

namespace spacewin {

std::string event_ref(const Event& e) {
  return fmt::format("{}{}", e.kind == EventKind::pickup ? 'p' : 'd', e.passenger);
}

std::optional<Event> parse_event_ref(std::string_view ref) {
  if (ref.size() < 2 || (ref[0] != 'p' && ref[0] != 'd')) {
    return std::nullopt;
  }
  int id = 0;
  const auto* first = ref.data() + 1;
  const auto* last = ref.data() + ref.size();
  auto [ptr, ec] = std::from_chars(first, last, id);
  if (ec != std::errc{} || ptr != last || id <= 0) {
    return std::nullopt;
  }
  return Event{ref[0] == 'p' ? EventKind::pickup : EventKind::dropoff, id};
}

ClusteringPattern ClusteringPattern::trivial(std::span<const RideRequest> requests,
                                             std::span<const PassengerId> onboard) {
  ClusteringPattern out;
  for (const auto& r : requests) {
    if (std::find(onboard.begin(), onboard.end(), r.id) == onboard.end()) {
      out.clusters.push_back({{Event{EventKind::pickup, r.id}}});
    }
    out.clusters.push_back({{Event{EventKind::dropoff, r.id}}});
  }
  return out;
}

std::vector<ClusterLoads> cluster_loads(const ClusteringPattern& pattern) {
  std::vector<ClusterLoads> out;
  out.reserve(pattern.size());
  for (const auto& c : pattern.clusters) {
    ClusterLoads l;
    for (const auto& e : c.events) {
      (e.kind == EventKind::pickup ? l.pickups : l.dropoffs) += 1;
    }
    out.push_back(l);
  }
  return out;
}

int Scenario::slot_of(PassengerId id) const {
  if (id < 0 || id >= static_cast<int>(slot_by_id_.size())) {
    return -1;
  }
  return slot_by_id_[id];
}

const OnboardPassenger* Scenario::onboard_record(int slot) const {
  const int idx = onboard_index_[slot];
  return idx < 0 ? nullptr : &data_.onboard[idx];
}

std::vector<int> Route::positions() const {
  std::vector<int> pos(sequence.size(), 0);
  for (std::size_t j = 0; j < sequence.size(); ++j) {
    pos[sequence[j]] = static_cast<int>(j) + 1;
  }
  return pos;
}

namespace {

bool finite(double v) { return std::isfinite(v); }

void check_config(const ScenarioData& d, std::vector<Issue>& issues) {
  const auto& v = d.vehicle;
  if (!(v.shuttle_speed > 0.0) || !finite(v.shuttle_speed)) {
    issues.push_back({ErrorCode::NonPositiveSpeed, "shuttle_speed must be positive"});
  }
  if (!(v.walk_speed > 0.0) || !finite(v.walk_speed)) {
    issues.push_back({ErrorCode::NonPositiveSpeed, "walk_speed must be positive"});
  }
  if (!(v.acceleration > 0.0)) {
    issues.push_back({ErrorCode::NonPositiveSpeed, "acceleration must be positive"});
  }
  if (!(v.service_time >= 0.0) || !finite(v.service_time)) {
    issues.push_back({ErrorCode::InvalidConfig, "service_time must be non-negative"});
  }

  const auto& c = d.config;
  const std::pair<const char*, double> weights[] = {
      {"gamma1", c.gamma1},         {"gamma2", c.gamma2},
      {"alpha1", c.alpha1},         {"alpha2", c.alpha2},
      {"alpha3_pickup", c.alpha3_pickup}, {"alpha3_dropoff", c.alpha3_dropoff}};
  for (const auto& [name, w] : weights) {
    if (!(w >= 0.0) || !finite(w)) {
      issues.push_back({ErrorCode::InvalidConfig, fmt::format("{} must be a non-negative number", name)});
    }
  }
  if (c.capacity < 1) {
    issues.push_back({ErrorCode::InvalidConfig, "capacity must be at least 1"});
  }
  if (c.mps_pickup < 1 || c.mps_dropoff < 1) {
    issues.push_back({ErrorCode::InvalidConfig, "MPS bounds must be positive"});
  }
  if (c.h_max < 1) {
    issues.push_back({ErrorCode::InvalidConfig, "h_max must be positive"});
  }
  if (!(c.eps_place > 0.0) || !(c.eps_geom > 0.0)) {
    issues.push_back({ErrorCode::InvalidConfig, "tolerances must be positive"});
  }
  if (c.max_placer_iterations < 1) {
    issues.push_back({ErrorCode::InvalidConfig, "max_placer_iterations must be positive"});
  }
  if (!finite(d.start_time) || !finite(d.depot.x) || !finite(d.depot.y)) {
    issues.push_back({ErrorCode::InvalidConfig, "depot and start time must be finite"});
  }
  if (d.pickups_done < 0 || d.dropoffs_done < 0) {
    issues.push_back({ErrorCode::InvalidConfig, "completed-event counters must be non-negative"});
  }
}

void check_requests(const ScenarioData& d, std::vector<Issue>& issues) {
  const bool fresh = d.onboard.empty() && d.pickups_done == 0 && d.dropoffs_done == 0;
  for (std::size_t i = 0; i < d.requests.size(); ++i) {
    const auto& r = d.requests[i];
    if (r.pickup_radius < 0.0 || r.dropoff_radius < 0.0) {
      issues.push_back({ErrorCode::NegativeRadius, fmt::format("request {} has a negative radius", r.id)});
    }
    if (!finite(r.pickup.x) || !finite(r.pickup.y) || !finite(r.dropoff.x) ||
        !finite(r.dropoff.y) || !finite(r.request_time) || !finite(r.pickup_radius) ||
        !finite(r.dropoff_radius)) {
      issues.push_back({ErrorCode::InvalidConfig, fmt::format("request {} has non-finite fields", r.id)});
      continue;
    }
    if (!r.frozen_pickup &&
        distance(r.pickup, r.dropoff) <= r.pickup_radius + r.dropoff_radius) {
      issues.push_back({ErrorCode::WalkDominates,
                        fmt::format("request {}: pickup and drop-off windows touch", r.id)});
    }
    if (fresh ? r.id != static_cast<int>(i) + 1 : r.id <= 0) {
      issues.push_back({ErrorCode::InvalidRequestIds,
                        fmt::format("request ids must be 1..n in order (found {} at position {})",
                                    r.id, i + 1)});
    }
    if (i > 0) {
      const auto& prev = d.requests[i - 1];
      if (r.id <= prev.id) {
        issues.push_back({ErrorCode::InvalidRequestIds,
                          fmt::format("request ids must increase (request {} after {})", r.id, prev.id)});
      }
      if (r.request_time < prev.request_time) {
        issues.push_back({ErrorCode::RequestOrder,
                          fmt::format("request {} precedes request {} in time", r.id, prev.id)});
      }
    }
  }
}

}  // namespace

Scenario validate_scenario(ScenarioData data) {
  std::vector<Issue> issues;
  check_config(data, issues);
  check_requests(data, issues);

  Scenario s;
  const int n = static_cast<int>(data.requests.size());
  int max_id = 0;
  for (const auto& r : data.requests) {
    max_id = std::max(max_id, r.id);
  }
  s.slot_by_id_.assign(max_id + 1, -1);
  for (int i = 0; i < n; ++i) {
    if (data.requests[i].id > 0 && s.slot_by_id_[data.requests[i].id] < 0) {
      s.slot_by_id_[data.requests[i].id] = i;
    }
  }
  auto slot = [&](PassengerId id) {
    return id > 0 && id <= max_id ? s.slot_by_id_[id] : -1;
  };

  s.onboard_index_.assign(n, -1);
  std::vector<PassengerId> onboard_ids;
  for (std::size_t i = 0; i < data.onboard.size(); ++i) {
    const int k = slot(data.onboard[i].id);
    if (k < 0) {
      issues.push_back({ErrorCode::UnknownEvent,
                        fmt::format("onboard passenger {} has no request", data.onboard[i].id)});
      continue;
    }
    if (s.onboard_index_[k] >= 0) {
      issues.push_back({ErrorCode::DuplicateEvent,
                        fmt::format("passenger {} listed onboard twice", data.onboard[i].id)});
      continue;
    }
    s.onboard_index_[k] = static_cast<int>(i);
    onboard_ids.push_back(data.onboard[i].id);
  }
  if (static_cast<int>(data.onboard.size()) > data.config.capacity) {
    issues.push_back({ErrorCode::InvalidConfig, "more passengers onboard than the capacity"});
  }

  if (!data.pattern) {
    data.pattern = ClusteringPattern::trivial(data.requests, onboard_ids);
  }
  const auto& clusters = data.pattern->clusters;
  const int num_clusters = static_cast<int>(clusters.size());

  s.pickup_cluster_.assign(n, kDepot);
  s.dropoff_cluster_.assign(n, kDepot);
  std::vector<char> pickup_seen(n, 0);
  std::vector<char> dropoff_seen(n, 0);
  s.cluster_pickups_.assign(num_clusters, {});
  s.cluster_dropoffs_.assign(num_clusters, {});
  std::vector<char> cluster_ok(num_clusters, 1);

  for (int i = 0; i < num_clusters; ++i) {
    if (clusters[i].events.empty()) {
      issues.push_back({ErrorCode::InvalidConfig, fmt::format("cluster {} has no events", i + 1)});
      cluster_ok[i] = 0;
    }
    for (const auto& e : clusters[i].events) {
      const int k = slot(e.passenger);
      if (k < 0) {
        issues.push_back({ErrorCode::UnknownEvent,
                          fmt::format("cluster {} refers to unknown event {}", i + 1, event_ref(e))});
        cluster_ok[i] = 0;
        continue;
      }
      if (e.kind == EventKind::pickup) {
        if (s.onboard_index_[k] >= 0) {
          issues.push_back({ErrorCode::UnknownEvent,
                            fmt::format("cluster {} repeats the finished pickup {}", i + 1, event_ref(e))});
          cluster_ok[i] = 0;
          continue;
        }
        if (pickup_seen[k]++) {
          issues.push_back({ErrorCode::DuplicateEvent,
                            fmt::format("event {} appears more than once", event_ref(e))});
          cluster_ok[i] = 0;
          continue;
        }
        s.pickup_cluster_[k] = i;
        s.cluster_pickups_[i].push_back(k);
      } else {
        if (dropoff_seen[k]++) {
          issues.push_back({ErrorCode::DuplicateEvent,
                            fmt::format("event {} appears more than once", event_ref(e))});
          cluster_ok[i] = 0;
          continue;
        }
        s.dropoff_cluster_[k] = i;
        s.cluster_dropoffs_[i].push_back(k);
      }
    }
  }

  for (int k = 0; k < n; ++k) {
    const PassengerId id = data.requests[k].id;
    if (s.onboard_index_[k] < 0 && !pickup_seen[k]) {
      issues.push_back({ErrorCode::MissingEvent, fmt::format("event p{} is not in any cluster", id)});
    }
    if (!dropoff_seen[k]) {
      issues.push_back({ErrorCode::MissingEvent, fmt::format("event d{} is not in any cluster", id)});
    }
    if (pickup_seen[k] && dropoff_seen[k] && s.pickup_cluster_[k] == s.dropoff_cluster_[k]) {
      issues.push_back({ErrorCode::SameClusterPickupDropoff,
                        fmt::format("p{0} and d{0} share cluster {1}", id, s.pickup_cluster_[k] + 1)});
      cluster_ok[s.pickup_cluster_[k]] = 0;
    }
  }

  s.areas_.resize(num_clusters);
  for (int i = 0; i < num_clusters; ++i) {
    std::vector<SpaceWindow> windows;
    bool has_frozen = false;
    for (int k : s.cluster_pickups_[i]) {
      windows.push_back(data.requests[k].pickup_window());
      has_frozen = has_frozen || data.requests[k].frozen_pickup.has_value();
    }
    for (int k : s.cluster_dropoffs_[i]) {
      windows.push_back(data.requests[k].dropoff_window());
    }
    if (windows.empty()) {
      continue;
    }
    s.areas_[i] = Area(std::move(windows));
    if (!cluster_ok[i] || data.requests.empty()) {
      continue;
    }
    if (!area_nonempty(s.areas_[i], data.config.eps_geom)) {
      if (has_frozen) {
        issues.push_back({ErrorCode::FrozenPointConflict,
                          fmt::format("cluster {} excludes a frozen pickup point", i + 1)});
      } else {
        issues.push_back({ErrorCode::EmptyArea,
                          fmt::format("cluster {} has an empty feasible area", i + 1)});
      }
    }
  }

  if (!issues.empty()) {
    throw ValidationError(std::move(issues));
  }

  s.loads_ = cluster_loads(*data.pattern);
  s.pending_pickups_ = 0;
  for (const auto& l : s.loads_) {
    s.pending_pickups_ += l.pickups;
  }
  s.data_ = std::move(data);
  return s;
}

}  // namespace spacewin
