#include "spacewin/generator.hpp"

#include <algorithm>
#include <tuple>

#include <fmt/format.h>

#include "spacewin/log.hpp"
#include "spacewin/sequencer.hpp"

namespace spacewin {

std::vector<InstanceShape> benchmark_shapes() {
  return {
      {"p06-c12-1", 6, 12, 0.0, 0.1, 0.3, 6},
      {"p06-c06-1", 6, 6, 0.0, 0.1, 0.3, 6},
      {"p06-c12-2", 6, 12, 1.0, 0.1, 0.3, 6},
      {"p06-c07-1", 6, 7, 1.0, 0.1, 0.3, 6},
      {"p06-c12-3", 6, 12, 1.0, 0.1, 0.3, 2},
      {"p06-c07-2", 6, 7, 1.0, 0.1, 0.3, 2},
      {"p06-c12-4", 6, 12, 0.0, 0.1, 0.15, 6},
      {"p06-c08-1", 6, 8, 0.0, 0.1, 0.15, 6},
  };
}

namespace {

RideRequest draw_request(UniformSource& rng, PassengerId id, double box, double radius,
                         double time) {
  RideRequest r;
  r.id = id;
  r.pickup = {rng.between(0.0, box), rng.between(0.0, box)};
  do {
    r.dropoff = {rng.between(0.0, box), rng.between(0.0, box)};
  } while (distance(r.pickup, r.dropoff) <= 2.0 * radius);
  r.pickup_radius = radius;
  r.dropoff_radius = radius;
  r.request_time = time;
  return r;
}

const RideRequest& request_of(const ScenarioData& data, PassengerId id) {
  return *std::find_if(data.requests.begin(), data.requests.end(),
                       [id](const RideRequest& r) { return r.id == id; });
}

Area area_of(const ScenarioData& data, const Cluster& c) {
  std::vector<SpaceWindow> disks;
  for (const auto& e : c.events) {
    const auto& r = request_of(data, e.passenger);
    disks.push_back(e.kind == EventKind::pickup ? r.pickup_window() : r.dropoff_window());
  }
  return Area(std::move(disks));
}

bool shares_passenger(const Cluster& a, const Cluster& b) {
  for (const auto& x : a.events) {
    for (const auto& y : b.events) {
      if (x.passenger == y.passenger) {
        return true;
      }
    }
  }
  return false;
}

bool pattern_feasible(const ScenarioData& data) {
  try {
    const Scenario s = validate_scenario(data);
    std::vector<Point> points;
    for (const auto& a : s.areas()) {
      points.push_back(area_centroid(a));
    }
    solve_sequence(points, s);
    return true;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

bool group_events(ScenarioData& data, int target) {
  if (!data.pattern) {
    std::vector<PassengerId> onboard;
    for (const auto& o : data.onboard) {
      onboard.push_back(o.id);
    }
    data.pattern = ClusteringPattern::trivial(data.requests, onboard);
  }
  while (static_cast<int>(data.pattern->size()) > target) {
    const auto& clusters = data.pattern->clusters;
    std::vector<Area> areas;
    for (const auto& c : clusters) {
      areas.push_back(area_of(data, c));
    }
    std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      for (std::size_t j = i + 1; j < clusters.size(); ++j) {
        if (shares_passenger(clusters[i], clusters[j])) {
          continue;
        }
        std::vector<SpaceWindow> disks(areas[i].disks().begin(), areas[i].disks().end());
        disks.insert(disks.end(), areas[j].disks().begin(), areas[j].disks().end());
        if (!area_nonempty(disks)) {
          continue;
        }
        pairs.emplace_back(distance(area_centroid(areas[i]), area_centroid(areas[j])), i, j);
      }
    }
    std::sort(pairs.begin(), pairs.end());

    bool merged = false;
    for (const auto& [d, i, j] : pairs) {
      ScenarioData trial = data;
      auto& tc = trial.pattern->clusters;
      tc[i].events.insert(tc[i].events.end(), tc[j].events.begin(), tc[j].events.end());
      std::sort(tc[i].events.begin(), tc[i].events.end());
      tc.erase(tc.begin() + static_cast<std::ptrdiff_t>(j));
      if (pattern_feasible(trial)) {
        data = std::move(trial);
        merged = true;
        break;
      }
    }
    if (!merged) {
      return false;
    }
  }
  return true;
}

ScenarioData generate_instance(const InstanceShape& shape, std::uint64_t seed,
                               const GeneratorOptions& options) {
  UniformSource rng(seed);
  const double radius = shape.radius_miles * kMile;
  for (int attempt = 0; attempt < options.attempts; ++attempt) {
    ScenarioData d;
    d.depot = {options.box / 2.0, options.box / 2.0};
    for (int k = 1; k <= shape.passengers; ++k) {
      d.requests.push_back(draw_request(rng, k, options.box, radius, 0.0));
    }
    d.config.gamma2 = shape.gamma2;
    d.config.alpha3_pickup = shape.alpha3;
    d.config.alpha3_dropoff = shape.alpha3;
    d.config.mps_pickup = shape.mps;
    d.config.mps_dropoff = shape.mps;
    if (group_events(d, shape.clusters)) {
      return d;
    }
    log::logger()->debug("generator: draw {} of {} could not reach {} clusters", attempt + 1,
                         shape.name, shape.clusters);
  }
  throw Error(ErrorCode::InfeasiblePattern,
              fmt::format("no feasible {}-cluster grouping found for {} after {} draws",
                          shape.clusters, shape.name, options.attempts));
}

ReplayFile generate_replay(const ReplayShape& shape, std::uint64_t seed,
                           const GeneratorOptions& options) {
  UniformSource rng(seed);
  const double radius = shape.radius_miles * kMile;
  ReplayFile out;
  out.scenario.depot = {options.box / 2.0, options.box / 2.0};
  PassengerId next = 1;
  for (int k = 0; k < shape.per_batch; ++k) {
    out.scenario.requests.push_back(draw_request(rng, next++, options.box, radius, 0.0));
  }
  if (shape.first_clusters > 0) {
    ScenarioData grouped = out.scenario;
    if (group_events(grouped, shape.first_clusters)) {
      out.scenario = std::move(grouped);
    }
  }
  for (int b = 1; b < shape.batches; ++b) {
    ReplayBatch batch;
    batch.time = b * shape.interval;
    for (int k = 0; k < shape.per_batch; ++k) {
      batch.requests.push_back(draw_request(rng, next++, options.box, radius, batch.time));
    }
    out.batches.push_back(std::move(batch));
  }
  return out;
}

}  // namespace spacewin
