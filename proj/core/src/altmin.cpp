#include "spacewin/altmin.hpp"

#include <algorithm>
#include <limits>

#include "spacewin/cost.hpp"
#include "spacewin/log.hpp"
#include "spacewin/placer.hpp"
#include "spacewin/sequencer.hpp"

namespace spacewin {

std::string_view to_string(Termination t) {
  return t == Termination::recurrence ? "recurrence" : "iteration_cap";
}

double optimality_gap(double altmin_cost, double oracle_cost) {
  return (altmin_cost - oracle_cost) / oracle_cost;
}

SolveResult solve(const Scenario& scenario, const AltMinOptions& options) {
  const int n = scenario.cluster_count();
  const int h_max = options.h_max.value_or(scenario.config().h_max);
  auto lg = log::logger();

  std::vector<Point> points;
  if (options.initial_points) {
    points = *options.initial_points;
    for (int i = 0; i < n; ++i) {
      points[i] = project_onto_area(points[i], scenario.area(i));
    }
  } else {
    for (int i = 0; i < n; ++i) {
      points.push_back(area_centroid(scenario.area(i)));
    }
  }

  SolveResult out;
  out.cost = std::numeric_limits<double>::infinity();
  std::vector<std::vector<ClusterIndex>> seen;
  double last_cost = std::numeric_limits<double>::infinity();

  for (int h = 1; h <= h_max; ++h) {
    IterationRecord rec;
    rec.h = h;
    SequenceSolution proposal = solve_sequence(points, scenario);
    rec.sequence = std::move(proposal.sequence);
    rec.sequence_cost = proposal.cost;

    // The recursion ignores departure waits, so its order can cost more than
    // the previous one once waits are priced; keep the previous order then.
    if (!seen.empty() && rec.sequence != seen.back()) {
      const double with_waits = time_route(scenario, rec.sequence, points).cost.total;
      if (with_waits > last_cost) {
        rec.sequence = seen.back();
        rec.retained = true;
      }
    }

    if (std::find(seen.begin(), seen.end(), rec.sequence) != seen.end()) {
      rec.repeated = true;
      out.history.push_back(std::move(rec));
      out.hbar = h;
      out.termination = Termination::recurrence;
      break;
    }
    seen.push_back(rec.sequence);

    const PlacementProblem problem = build_placement(rec.sequence, scenario, std::span<const Point>(points));
    PlacementResult placed;
    try {
      placed = solve_placement(problem);
    } catch (const PlacementNonConvergence& e) {
      lg->warn("placement hit the iteration cap at mega iteration {}", h);
      placed = e.best();
    }
    rec.cost = placed.cost;
    rec.placement_converged = placed.converged;
    rec.placer_iterations = placed.iterations;
    points = placed.points;
    last_cost = placed.cost;
    if (placed.cost < out.cost) {
      out.cost = placed.cost;
      out.sequence = rec.sequence;
      out.points = points;
    }
    lg->debug("mega iteration {}: cost {}", h, placed.cost);
    out.history.push_back(std::move(rec));
    out.hbar = h;
    out.termination = Termination::iteration_cap;
  }

  out.route = time_route(scenario, out.sequence, out.points);
  out.cost = out.route.cost.total;
  return out;
}

}  // namespace spacewin
