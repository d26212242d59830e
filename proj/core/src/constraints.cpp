#include "spacewin/constraints.hpp"

#include <algorithm>
#include <climits>

#include <fmt/format.h>

namespace spacewin {

std::string Violation::describe() const {
  switch (kind) {
    case Kind::Structure: return "sequence is not a permutation of the clusters";
    case Kind::Legitimacy: return fmt::format("LegitimacyViolation({})", passenger);
    case Kind::Capacity: return fmt::format("CapacityExceeded({})", position);
    case Kind::PickupShift: return fmt::format("MPSViolation({}, pickup)", passenger);
    case Kind::DropoffShift: return fmt::format("MPSViolation({}, dropoff)", passenger);
  }
  return "unknown";
}

std::vector<Violation> check_sequence(std::span<const ClusterIndex> sequence,
                                      const Scenario& scenario) {
  const int num_clusters = scenario.cluster_count();
  std::vector<int> pos(num_clusters, 0);
  bool permutation = static_cast<int>(sequence.size()) == num_clusters;
  for (std::size_t j = 0; permutation && j < sequence.size(); ++j) {
    const ClusterIndex c = sequence[j];
    if (c < 0 || c >= num_clusters || pos[c] != 0) {
      permutation = false;
    } else {
      pos[c] = static_cast<int>(j) + 1;
    }
  }
  if (!permutation) {
    return {Violation{Violation::Kind::Structure, 0, 0}};
  }

  std::vector<Violation> out;
  const auto requests = scenario.requests();
  const auto& cfg = scenario.config();

  for (int k = 0; k < scenario.passenger_count(); ++k) {
    const ClusterIndex pc = scenario.pickup_cluster(k);
    if (pc != kDepot && pos[pc] > pos[scenario.dropoff_cluster(k)]) {
      out.push_back({Violation::Kind::Legitimacy, requests[k].id, pos[pc]});
    }
  }

  int load = static_cast<int>(scenario.onboard().size());
  for (std::size_t j = 0; j < sequence.size(); ++j) {
    load += scenario.loads(sequence[j]).net();
    if (load > cfg.capacity || load < 0) {
      out.push_back({Violation::Kind::Capacity, 0, static_cast<int>(j) + 1});
    }
  }

  // Tied events of one cluster share the position 1 + (prior events of the kind).
  std::vector<int> pickup_order(num_clusters), dropoff_order(num_clusters);
  int pickups = scenario.pickups_done();
  int dropoffs = scenario.dropoffs_done();
  for (ClusterIndex c : sequence) {
    pickup_order[c] = pickups + 1;
    dropoff_order[c] = dropoffs + 1;
    pickups += scenario.loads(c).pickups;
    dropoffs += scenario.loads(c).dropoffs;
  }
  for (int k = 0; k < scenario.passenger_count(); ++k) {
    const PassengerId id = requests[k].id;
    const ClusterIndex pc = scenario.pickup_cluster(k);
    if (pc != kDepot && std::abs(pickup_order[pc] - id) > cfg.mps_pickup) {
      out.push_back({Violation::Kind::PickupShift, id, pos[pc]});
    }
    const ClusterIndex dc = scenario.dropoff_cluster(k);
    if (std::abs(dropoff_order[dc] - id) > cfg.mps_dropoff) {
      out.push_back({Violation::Kind::DropoffShift, id, pos[dc]});
    }
  }
  return out;
}

SequenceRules::SequenceRules(const Scenario& scenario) {
  const int num_clusters = scenario.cluster_count();
  if (num_clusters > 32) {
    throw Error(ErrorCode::ProblemTooLarge,
                fmt::format("{} clusters exceed the 32-cluster state encoding", num_clusters));
  }
  const auto& cfg = scenario.config();
  const auto requests = scenario.requests();
  capacity_ = cfg.capacity;
  initial_load_ = static_cast<int>(scenario.onboard().size());
  required_.assign(num_clusters, 0);
  net_.resize(num_clusters);
  pickups_.resize(num_clusters);
  dropoffs_.resize(num_clusters);
  pickup_lo_.assign(num_clusters, INT_MIN);
  pickup_hi_.assign(num_clusters, INT_MAX);
  dropoff_lo_.assign(num_clusters, INT_MIN);
  dropoff_hi_.assign(num_clusters, INT_MAX);

  for (ClusterIndex i = 0; i < num_clusters; ++i) {
    net_[i] = scenario.loads(i).net();
    pickups_[i] = scenario.loads(i).pickups;
    dropoffs_[i] = scenario.loads(i).dropoffs;
    // Bounds on events of the kind finished in earlier clusters of this plan.
    for (int k : scenario.cluster_pickups(i)) {
      const int base = requests[k].id - 1 - scenario.pickups_done();
      pickup_lo_[i] = std::max(pickup_lo_[i], base - cfg.mps_pickup);
      pickup_hi_[i] = std::min(pickup_hi_[i], base + cfg.mps_pickup);
    }
    for (int k : scenario.cluster_dropoffs(i)) {
      const int base = requests[k].id - 1 - scenario.dropoffs_done();
      dropoff_lo_[i] = std::max(dropoff_lo_[i], base - cfg.mps_dropoff);
      dropoff_hi_[i] = std::min(dropoff_hi_[i], base + cfg.mps_dropoff);
      const ClusterIndex pc = scenario.pickup_cluster(k);
      if (pc != kDepot) {
        required_[i] |= 1U << pc;
      }
    }
  }
}

int SequenceRules::load(std::uint32_t visited) const {
  int total = initial_load_;
  for (std::uint32_t m = visited; m != 0; m &= m - 1) {
    total += net_[std::countr_zero(m)];
  }
  return total;
}

int SequenceRules::picked(std::uint32_t visited) const {
  int total = 0;
  for (std::uint32_t m = visited; m != 0; m &= m - 1) {
    total += pickups_[std::countr_zero(m)];
  }
  return total;
}

bool SequenceRules::state_ok(std::uint32_t visited, ClusterIndex at) const {
  const int q = load(visited);
  if (q > capacity_ || q < 0) {
    return false;
  }
  const std::uint32_t before = visited & ~(1U << at);
  int p = 0;
  int d = 0;
  for (std::uint32_t m = before; m != 0; m &= m - 1) {
    const int i = std::countr_zero(m);
    p += pickups_[i];
    d += dropoffs_[i];
  }
  return p >= pickup_lo_[at] && p <= pickup_hi_[at] && d >= dropoff_lo_[at] &&
         d <= dropoff_hi_[at];
}

bool state_feasible(const SystemState& s, const Scenario& scenario) {
  if (!s.consistent()) {
    return false;
  }
  if (s.at == kDepot) {
    return true;
  }
  return SequenceRules(scenario).state_ok(s.visited, s.at);
}

std::vector<SystemState> feasible_next_states(const SystemState& s, const Scenario& scenario) {
  const SequenceRules rules(scenario);
  std::vector<SystemState> out;
  for (ClusterIndex j = 0; j < rules.cluster_count(); ++j) {
    if (!rules.can_visit(s.visited, j)) {
      continue;
    }
    const SystemState next{j, s.visited | (1U << j)};
    if (rules.state_ok(next.visited, j)) {
      out.push_back(next);
    }
  }
  return out;
}

std::vector<StopSlack> check_departures(const Route& route, const Scenario& scenario) {
  std::vector<StopSlack> out;
  const auto requests = scenario.requests();
  const double vp = scenario.vehicle().walk_speed;
  for (std::size_t j = 0; j < route.sequence.size(); ++j) {
    const ClusterIndex c = route.sequence[j];
    StopSlack s;
    s.position = static_cast<int>(j) + 1;
    s.cluster = c;
    s.ready_time = route.start_time;
    for (int k : scenario.cluster_pickups(c)) {
      const double walk = distance(route.routing_points[c], requests[k].pickup) / vp;
      s.ready_time = std::max(s.ready_time, requests[k].request_time + walk);
    }
    s.slack = route.departure_times[j] - s.ready_time;
    s.required_wait = std::max(0.0, -s.slack);
    out.push_back(s);
  }
  return out;
}

}  // namespace spacewin
