#include "spacewin/sequencer.hpp"

#include <algorithm>
#include <limits>

#include <fmt/format.h>

#include "spacewin/cost.hpp"
#include "spacewin/log.hpp"

namespace spacewin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t key(const SystemState& s) {
  return (static_cast<std::uint64_t>(s.visited) << 6) | static_cast<std::uint64_t>(s.at + 1);
}

bool key_less(const ValueEntry& a, const ValueEntry& b) { return key(a.state) < key(b.state); }

// Multiplier from precomputed per-cluster counts.
struct Multiplier {
  double gamma1, wait_weight, ride_weight;
  int pending, initial_load;
  std::vector<int> pickups, net;

  explicit Multiplier(const Scenario& s)
    : gamma1(s.config().gamma1),
      wait_weight(s.config().gamma2 * s.config().alpha1),
      ride_weight(s.config().gamma2 * s.config().alpha2),
      pending(s.pending_pickups()),
      initial_load(static_cast<int>(s.onboard().size())) {
    for (const auto& l : s.loads()) {
      pickups.push_back(l.pickups);
      net.push_back(l.net());
    }
  }

  double operator()(std::uint32_t visited) const {
    int waiting = pending;
    int load = initial_load;
    for (std::uint32_t m = visited; m != 0; m &= m - 1) {
      const int i = std::countr_zero(m);
      waiting -= pickups[i];
      load += net[i];
    }
    return gamma1 + wait_weight * waiting + ride_weight * load;
  }
};

}  // namespace

double segment_multiplier(const SystemState& s, const Scenario& scenario) {
  return Multiplier(scenario)(s.visited);
}

EdgeTimes edge_times(const Scenario& scenario, std::span<const Point> points) {
  const int n = scenario.cluster_count();
  const double vs = scenario.vehicle().shuttle_speed;
  const double ta = scenario.stop_overhead();
  EdgeTimes e;
  e.clusters = n;
  e.values.resize(static_cast<std::size_t>(n + 1) * n);
  for (int from = -1; from < n; ++from) {
    const Point a = from < 0 ? scenario.depot() : points[from];
    for (int to = 0; to < n; ++to) {
      e.values[static_cast<std::size_t>(from + 1) * n + to] = distance(a, points[to]) / vs + ta;
    }
  }
  return e;
}

const ValueEntry* ValueTable::find(const SystemState& s) const {
  const int e = s.entropy();
  if (e >= levels()) {
    return nullptr;
  }
  const auto& lv = levels_[e];
  const ValueEntry probe{s, 0.0, kDepot};
  auto it = std::lower_bound(lv.begin(), lv.end(), probe, key_less);
  return it != lv.end() && it->state == s ? &*it : nullptr;
}

std::size_t ValueTable::size() const {
  std::size_t total = 0;
  for (const auto& lv : levels_) {
    total += lv.size();
  }
  return total;
}

ValueTable build_value_table(const Scenario& scenario, const SequenceRules& rules,
                             const EdgeTimes& edges) {
  const int n = scenario.cluster_count();
  std::vector<std::vector<ValueEntry>> levels(n + 1);
  levels[0].push_back({SystemState{}, kInf, kDepot});

  for (int e = 0; e < n; ++e) {
    auto& next = levels[e + 1];
    for (const auto& entry : levels[e]) {
      const std::uint32_t visited = entry.state.visited;
      for (ClusterIndex j = 0; j < n; ++j) {
        if (!rules.can_visit(visited, j)) {
          continue;
        }
        const std::uint32_t after = visited | (1U << j);
        if (rules.state_ok(after, j)) {
          next.push_back({SystemState{j, after}, kInf, kDepot});
        }
      }
    }
    std::sort(next.begin(), next.end(), key_less);
    next.erase(std::unique(next.begin(), next.end(),
                           [](const ValueEntry& a, const ValueEntry& b) { return a.state == b.state; }),
               next.end());
  }

  for (auto& entry : levels[n]) {
    entry.value = 0.0;
  }
  const Multiplier multiplier(scenario);
  for (int e = n - 1; e >= 0; --e) {
    const auto& after = levels[e + 1];
    for (auto& entry : levels[e]) {
      const std::uint32_t visited = entry.state.visited;
      const double m = multiplier(visited);
      for (ClusterIndex j = 0; j < n; ++j) {
        if (!rules.can_visit(visited, j)) {
          continue;
        }
        const ValueEntry probe{SystemState{j, visited | (1U << j)}, 0.0, kDepot};
        auto it = std::lower_bound(after.begin(), after.end(), probe, key_less);
        if (it == after.end() || !(it->state == probe.state) || it->value == kInf) {
          continue;
        }
        const double candidate = m * edges(entry.state.at, j) + it->value;
        if (candidate < entry.value) {
          entry.value = candidate;
          entry.next = j;
        }
      }
    }
  }
  return ValueTable(std::move(levels));
}

SequenceSolution solve_sequence(const EdgeTimes& edges, const Scenario& scenario) {
  const int n = scenario.cluster_count();
  if (n > scenario.config().max_clusters) {
    throw Error(ErrorCode::ProblemTooLarge,
                fmt::format("{} clusters exceed the sequencing limit of {}", n,
                            scenario.config().max_clusters));
  }
  const SequenceRules rules(scenario);
  const ValueTable table = build_value_table(scenario, rules, edges);

  SequenceSolution out;
  out.states = table.size();
  const ValueEntry* at = table.find(SystemState{});
  if (at->value == kInf) {
    throw Error(ErrorCode::InfeasiblePattern, "no visit order satisfies the constraints");
  }
  out.dp_value = at->value;
  out.cost = at->value;
  while (at->next != kDepot) {
    out.sequence.push_back(at->next);
    at = table.find(SystemState{at->next, at->state.visited | (1U << at->next)});
  }
  log::logger()->debug("sequencer: {} states, value {}", out.states, out.dp_value);
  return out;
}

SequenceSolution solve_sequence(std::span<const Point> points, const Scenario& scenario) {
  auto out = solve_sequence(edge_times(scenario, points), scenario);
  out.cost = out.dp_value + sequence_independent_cost(scenario, points);
  return out;
}

}  // namespace spacewin
