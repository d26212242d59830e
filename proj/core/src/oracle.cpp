#include "spacewin/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <limits>

#include "spacewin/constraints.hpp"
#include "spacewin/cost.hpp"
#include "spacewin/log.hpp"
#include "spacewin/placer.hpp"
#include "spacewin/sequencer.hpp"

namespace spacewin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <typename Leaf>
void walk_orders(const SequenceRules& rules, std::vector<ClusterIndex>& prefix,
                 std::uint32_t visited, const Leaf& leaf) {
  const int n = rules.cluster_count();
  if (static_cast<int>(prefix.size()) == n) {
    leaf(std::span<const ClusterIndex>(prefix));
    return;
  }
  for (ClusterIndex j = 0; j < n; ++j) {
    if (!rules.can_visit(visited, j)) {
      continue;
    }
    const std::uint32_t after = visited | (1U << j);
    if (!rules.state_ok(after, j)) {
      continue;
    }
    prefix.push_back(j);
    walk_orders(rules, prefix, after, leaf);
    prefix.pop_back();
  }
}

double gap_to_window(Point p, const Area& area) {
  double best = 0.0;
  for (const auto& d : area.disks()) {
    best = std::max(best, distance(p, d.center) - d.radius);
  }
  return best;
}

class Search {
 public:
  Search(const Scenario& scenario, const ExactOptions& options)
    : scenario_(scenario),
      options_(options),
      rules_(scenario),
      n_(scenario.cluster_count()),
      start_(std::chrono::steady_clock::now()) {
    const auto& cfg = scenario.config();
    const double vs = scenario.vehicle().shuttle_speed;
    const double vp = scenario.vehicle().walk_speed;
    const double ta = scenario.stop_overhead();

    lb_edges_.clusters = n_;
    lb_edges_.values.resize(static_cast<std::size_t>(n_ + 1) * n_);
    for (int to = 0; to < n_; ++to) {
      lb_edges_.values[to] = gap_to_window(scenario.depot(), scenario.area(to)) / vs + ta;
      for (int from = 0; from < n_; ++from) {
        lb_edges_.values[static_cast<std::size_t>(from + 1) * n_ + to] =
            area_distance_lower_bound(scenario.area(from), scenario.area(to)) / vs + ta;
      }
    }
    if (options.prune) {
      table_.emplace(build_value_table(scenario, rules_, lb_edges_));
    }

    const auto requests = scenario.requests();
    const double t0 = scenario.start_time();
    double fixed = 0.0;
    for (int k = 0; k < scenario.passenger_count(); ++k) {
      const auto& r = requests[k];
      if (const auto* ob = scenario.onboard_record(k)) {
        fixed += cfg.alpha1 * (ob->pickup_time - r.request_time) + cfg.alpha2 * (t0 - ob->pickup_time) +
                 cfg.alpha3_pickup * ob->pickup_walk_time;
      } else {
        fixed += cfg.alpha1 * (t0 - r.request_time) +
                 cfg.alpha3_pickup * gap_to_window(r.pickup, scenario.area(scenario.pickup_cluster(k))) / vp;
      }
      fixed += cfg.alpha3_dropoff *
               gap_to_window(r.dropoff, scenario.area(scenario.dropoff_cluster(k))) / vp;
    }
    constant_lb_ = cfg.gamma2 * fixed;
    wait_weight_ = cfg.gamma2 * cfg.alpha1;
    ride_weight_ = cfg.gamma2 * cfg.alpha2;
  }

  ExactResult run() {
    result_.cost = kInf;
    prefix_.reserve(n_);
    dfs(kDepot, 0, 0.0, scenario_.pending_pickups(), static_cast<int>(scenario_.onboard().size()));
    result_.proven = !timed_out_;
    result_.seconds = elapsed();
    return std::move(result_);
  }

 private:
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  void dfs(ClusterIndex at, std::uint32_t visited, double prefix_lb, int waiting, int aboard) {
    if (timed_out_) {
      return;
    }
    if ((++result_.nodes & 255U) == 0 && elapsed() > options_.time_cap) {
      timed_out_ = true;
      return;
    }
    if (static_cast<int>(prefix_.size()) == n_) {
      place();
      return;
    }
    const double m = scenario_.config().gamma1 + wait_weight_ * waiting + ride_weight_ * aboard;
    // Children with the smallest bound first, so good incumbents come early.
    struct Child {
      double bound;
      ClusterIndex cluster;
      double lb;
    };
    std::vector<Child> children;
    for (ClusterIndex j = 0; j < n_; ++j) {
      if (!rules_.can_visit(visited, j)) {
        continue;
      }
      const std::uint32_t after = visited | (1U << j);
      if (!rules_.state_ok(after, j)) {
        continue;
      }
      const double lb = prefix_lb + m * lb_edges_(at, j);
      double rest = 0.0;
      if (table_) {
        const ValueEntry* e = table_->find(SystemState{j, after});
        if (e == nullptr || e->value == kInf) {
          continue;
        }
        rest = e->value;
      }
      children.push_back({constant_lb_ + lb + rest, j, lb});
    }
    if (table_) {
      std::sort(children.begin(), children.end(), [](const Child& a, const Child& b) {
        return a.bound < b.bound || (a.bound == b.bound && a.cluster < b.cluster);
      });
    }
    for (const auto& c : children) {
      if (table_ && c.bound >= result_.cost) {
        break;
      }
      const ClusterIndex j = c.cluster;
      prefix_.push_back(j);
      dfs(j, visited | (1U << j), c.lb, waiting - scenario_.loads(j).pickups,
          aboard + scenario_.loads(j).net());
      prefix_.pop_back();
    }
  }

  void place() {
    std::optional<std::span<const Point>> warm;
    if (!result_.points.empty()) {
      warm = std::span<const Point>(result_.points);
    }
    const PlacementProblem problem = build_placement(prefix_, scenario_, warm);
    PlacementResult placed;
    try {
      placed = solve_placement(problem);
    } catch (const PlacementNonConvergence& e) {
      log::logger()->warn("oracle: placement hit the iteration cap");
      placed = e.best();
    }
    ++result_.placements;
    if (placed.cost < result_.cost ||
        (placed.cost == result_.cost && std::lexicographical_compare(prefix_.begin(), prefix_.end(),
                                                                     result_.sequence.begin(),
                                                                     result_.sequence.end()))) {
      result_.cost = placed.cost;
      result_.sequence = prefix_;
      result_.points = std::move(placed.points);
    }
  }

  const Scenario& scenario_;
  ExactOptions options_;
  SequenceRules rules_;
  int n_;
  std::chrono::steady_clock::time_point start_;
  EdgeTimes lb_edges_;
  std::optional<ValueTable> table_;
  double constant_lb_ = 0.0;
  double wait_weight_ = 0.0;
  double ride_weight_ = 0.0;
  std::vector<ClusterIndex> prefix_;
  bool timed_out_ = false;
  ExactResult result_;
};

}  // namespace

std::size_t enumerate_feasible_sequences(
    const Scenario& scenario, const std::function<void(std::span<const ClusterIndex>)>& visit) {
  const SequenceRules rules(scenario);
  std::vector<ClusterIndex> prefix;
  std::size_t count = 0;
  walk_orders(rules, prefix, 0, [&](std::span<const ClusterIndex> order) {
    ++count;
    if (visit) {
      visit(order);
    }
  });
  return count;
}

ExactResult solve_exact(const Scenario& scenario, const ExactOptions& options) {
  ExactResult result = Search(scenario, options).run();
  if (result.sequence.empty() && scenario.cluster_count() > 0) {
    if (result.proven) {
      throw Error(ErrorCode::InfeasiblePattern, "no visit order satisfies the constraints");
    }
    throw Error(ErrorCode::NonConvergence, "time cap reached before any order was placed");
  }
  result.route = time_route(scenario, result.sequence, result.points);
  result.cost = result.route.cost.total;
  log::logger()->debug("oracle: {} placements, {} nodes, {:.3f} s", result.placements,
                       result.nodes, result.seconds);
  return result;
}

FixedPointsResult best_order_for_points(const Scenario& scenario, std::span<const Point> points) {
  FixedPointsResult out;
  out.cost = kInf;
  out.sequences = enumerate_feasible_sequences(scenario, [&](std::span<const ClusterIndex> order) {
    const double c = time_route(scenario, order, points, Departures::ignore).cost.total;
    if (c < out.cost) {
      out.cost = c;
      out.sequence.assign(order.begin(), order.end());
    }
  });
  if (out.sequences == 0) {
    throw Error(ErrorCode::InfeasiblePattern, "no visit order satisfies the constraints");
  }
  return out;
}

}  // namespace spacewin
