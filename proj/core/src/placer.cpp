#include "spacewin/placer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "spacewin/cost.hpp"
#include "spacewin/log.hpp"

namespace spacewin {

PlacementProblem build_placement(std::span<const ClusterIndex> sequence, const Scenario& scenario,
                                 std::optional<std::span<const Point>> warm_start) {
  const auto& cfg = scenario.config();
  const auto& vehicle = scenario.vehicle();
  const auto requests = scenario.requests();
  const int n = static_cast<int>(sequence.size());

  PlacementProblem p;
  p.sequence.assign(sequence.begin(), sequence.end());
  p.start = scenario.depot();
  p.start_time = scenario.start_time();
  p.shuttle_speed = vehicle.shuttle_speed;
  p.walk_speed = vehicle.walk_speed;
  p.stop_overhead = scenario.stop_overhead();
  p.eps_place = cfg.eps_place;
  p.max_iterations = cfg.max_placer_iterations;
  p.multipliers = segment_weights(scenario, sequence);

  std::vector<int> pos(n);
  int waiting = scenario.pending_pickups();
  int aboard = static_cast<int>(scenario.onboard().size());
  for (int j = 0; j < n; ++j) {
    const ClusterIndex c = sequence[j];
    pos[c] = j;
    p.areas.push_back(scenario.area(c));
    p.waiting.push_back(waiting);
    p.riding.push_back(aboard);
    waiting -= scenario.loads(c).pickups;
    aboard += scenario.loads(c).net();
  }

  const double t0 = scenario.start_time();
  const double pickup_weight = cfg.gamma2 * cfg.alpha3_pickup;
  const double dropoff_weight = cfg.gamma2 * cfg.alpha3_dropoff;
  double sunk = 0.0;
  for (int k = 0; k < scenario.passenger_count(); ++k) {
    const auto& r = requests[k];
    if (const auto* ob = scenario.onboard_record(k)) {
      sunk += cfg.alpha1 * (ob->pickup_time - r.request_time) + cfg.alpha2 * (t0 - ob->pickup_time) +
              cfg.alpha3_pickup * ob->pickup_walk_time;
    } else {
      const int at = pos[scenario.pickup_cluster(k)];
      sunk += cfg.alpha1 * (t0 - r.request_time);
      if (pickup_weight > 0.0) {
        p.walks.push_back({at, r.pickup, pickup_weight});
      }
      p.boardings.push_back({at, r.pickup, r.request_time});
    }
    if (dropoff_weight > 0.0) {
      p.walks.push_back({pos[scenario.dropoff_cluster(k)], r.dropoff, dropoff_weight});
    }
  }
  p.constant = cfg.gamma2 * sunk;

  p.initial.resize(n);
  for (int j = 0; j < n; ++j) {
    p.initial[j] = warm_start ? project_onto_area((*warm_start)[sequence[j]], p.areas[j])
                              : area_centroid(p.areas[j]);
  }
  return p;
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

class Objective {
 public:
  explicit Objective(const PlacementProblem& p) : p_(p), n_(p.size()) {
    // Weight of each covered departure requirement in the optimal-wait cost.
    std::vector<double> cheap(n_ + 1, 0.0);
    double lowest = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n_; ++j) {
      lowest = std::min(lowest, p.multipliers[j]);
      cheap[j] = lowest;
    }
    step_.resize(n_);
    for (int j = 0; j < n_; ++j) {
      step_[j] = cheap[j] - cheap[j + 1];
    }
    boardings_at_.resize(n_);
    for (std::size_t b = 0; b < p.boardings.size(); ++b) {
      boardings_at_[p.boardings[b].position].push_back(static_cast<int>(b));
    }
  }

  double exact(std::span<const Point> x) const {
    const double ta = p_.stop_overhead;
    double cost = p_.constant;
    std::vector<double> need(n_, kNegInf);
    double base = p_.start_time;
    Point prev = p_.start;
    for (int j = 0; j < n_; ++j) {
      const double travel = distance(prev, x[j]) / p_.shuttle_speed;
      cost += p_.multipliers[j] * (travel + ta);
      base += travel + ta;
      for (int b : boardings_at_[j]) {
        const auto& bd = p_.boardings[b];
        need[j] = std::max(need[j], bd.release_time + distance(x[j], bd.anchor) / p_.walk_speed - base);
      }
      prev = x[j];
    }
    for (const auto& w : p_.walks) {
      cost += w.weight * distance(x[w.position], w.anchor) / p_.walk_speed;
    }
    return cost + plan_waits(p_.multipliers, need).cost;
  }

  // Smoothed objective: norms become sqrt(|v|^2 + mu^2) - mu and the
  // departure maxima become log-sum-exp at temperature tau.
  double smooth(std::span<const Point> x, double mu, double tau, std::vector<Point>& grad) const {
    const double ta = p_.stop_overhead;
    grad.assign(n_, Point{});
    double cost = p_.constant;

    std::vector<Point> dir(n_);
    std::vector<double> travel(n_);
    Point prev = p_.start;
    for (int j = 0; j < n_; ++j) {
      const Point v = x[j] - prev;
      const double len = std::sqrt(dot(v, v) + mu * mu);
      travel[j] = (len - mu) / p_.shuttle_speed;
      dir[j] = (1.0 / len) * v;
      cost += p_.multipliers[j] * (travel[j] + ta);
      prev = x[j];
    }
    for (const auto& w : p_.walks) {
      const Point v = x[w.position] - w.anchor;
      const double len = std::sqrt(dot(v, v) + mu * mu);
      const double scale = w.weight / p_.walk_speed;
      cost += scale * (len - mu);
      grad[w.position] += (scale / len) * v;
    }

    // Departure terms a_b = release + walk - (start + cumulative segment time).
    std::vector<double> travel_coef(p_.multipliers);
    if (!p_.boardings.empty()) {
      const std::size_t nb = p_.boardings.size();
      std::vector<double> term(nb);
      std::vector<Point> walk_dir(nb);
      std::vector<int> order;
      order.reserve(nb);
      double base = p_.start_time;
      for (int j = 0; j < n_; ++j) {
        base += travel[j] + ta;
        for (int b : boardings_at_[j]) {
          const auto& bd = p_.boardings[b];
          const Point v = x[j] - bd.anchor;
          const double len = std::sqrt(dot(v, v) + mu * mu);
          term[b] = bd.release_time + (len - mu) / p_.walk_speed - base;
          walk_dir[b] = (1.0 / len) * v;
          order.push_back(b);
        }
      }
      std::vector<double> omega(nb, 0.0);
      std::size_t seen = 0;
      double top = 0.0;
      for (int p = 0; p < n_; ++p) {
        seen += boardings_at_[p].size();
        for (int b : boardings_at_[p]) {
          top = std::max(top, term[b]);
        }
        if (step_[p] <= 0.0 || seen == 0) {
          continue;
        }
        double sum = std::exp(-top / tau);
        for (std::size_t i = 0; i < seen; ++i) {
          sum += std::exp((term[order[i]] - top) / tau);
        }
        const double smax = top + tau * std::log(sum);
        cost += step_[p] * smax;
        for (std::size_t i = 0; i < seen; ++i) {
          omega[order[i]] += step_[p] * std::exp((term[order[i]] - smax) / tau);
        }
      }
      double tail = 0.0;
      std::vector<double> suffix(n_, 0.0);
      for (int j = n_ - 1; j >= 0; --j) {
        for (int b : boardings_at_[j]) {
          tail += omega[b];
          grad[j] += (omega[b] / p_.walk_speed) * walk_dir[b];
        }
        suffix[j] = tail;
      }
      for (int j = 0; j < n_; ++j) {
        travel_coef[j] -= suffix[j];
      }
    }
    for (int j = 0; j < n_; ++j) {
      const Point g = (travel_coef[j] / p_.shuttle_speed) * dir[j];
      grad[j] += g;
      if (j > 0) {
        grad[j - 1] += -1.0 * g;
      }
    }
    return cost;
  }

 private:
  const PlacementProblem& p_;
  int n_;
  std::vector<double> step_;
  std::vector<std::vector<int>> boardings_at_;
};

double sq_dist(std::span<const Point> a, std::span<const Point> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Point d = a[i] - b[i];
    s += dot(d, d);
  }
  return s;
}

std::vector<Point> by_cluster(const PlacementProblem& p, std::span<const Point> by_position) {
  std::vector<Point> out(by_position.size());
  for (int j = 0; j < p.size(); ++j) {
    out[p.sequence[j]] = by_position[j];
  }
  return out;
}

}  // namespace

double placement_cost(const PlacementProblem& problem, std::span<const Point> by_position) {
  return Objective(problem).exact(by_position);
}

PlacementNonConvergence::PlacementNonConvergence(PlacementResult best)
  : Error(ErrorCode::NonConvergence,
          fmt::format("placement stopped at the {}-iteration cap", best.iterations)),
    best_(std::move(best)) {}

PlacementResult solve_placement(const PlacementProblem& problem) {
  const int n = problem.size();
  const Objective objective(problem);

  std::vector<char> free(n, 0);
  double extent = 0.0;
  std::vector<Point> x(n);
  for (int j = 0; j < n; ++j) {
    const Area& area = problem.areas[j];
    if (auto pin = area.pinned_point()) {
      x[j] = *pin;
    } else {
      x[j] = project_onto_area(problem.initial.empty() ? area_centroid(area) : problem.initial[j],
                               area);
      free[j] = 1;
      extent = std::max(extent, area.disks()[area.tightest()].radius);
    }
  }

  PlacementResult result;
  std::vector<Point> best = x;
  double best_cost = objective.exact(x);
  if (extent == 0.0) {
    result.points = by_cluster(problem, best);
    result.cost = best_cost;
    return result;
  }

  auto project = [&](std::vector<Point>& pts) {
    for (int j = 0; j < n; ++j) {
      pts[j] = free[j] ? project_onto_area(pts[j], problem.areas[j]) : x[j];
    }
  };

  constexpr int kStages = 7;
  constexpr int kPatience = 20;
  const double stage_tol = 1e-3 * problem.eps_place;
  int iterations = 0;
  bool converged = true;
  double lipschitz = 0.0;
  std::vector<Point> grad, trial, trial_grad, y;

  for (int stage = 0; stage < kStages && converged; ++stage) {
    const double mu = extent * std::pow(10.0, -1.0 - stage);
    const double tau = mu / problem.shuttle_speed;
    y = x;
    double t = 1.0;
    double fx = objective.smooth(x, mu, tau, grad);
    std::vector<double> history{fx};
    if (lipschitz == 0.0) {
      lipschitz = 1.0 / (problem.shuttle_speed * mu);
    }

    for (;;) {
      if (iterations >= problem.max_iterations) {
        converged = false;
        break;
      }
      ++iterations;
      const double fy = objective.smooth(y, mu, tau, grad);
      double ftrial = 0.0;
      for (;;) {
        trial.resize(n);
        for (int j = 0; j < n; ++j) {
          trial[j] = y[j] - (1.0 / lipschitz) * grad[j];
        }
        project(trial);
        ftrial = objective.smooth(trial, mu, tau, trial_grad);
        double model = fy + 0.5 * lipschitz * sq_dist(trial, y);
        for (int j = 0; j < n; ++j) {
          model += dot(grad[j], trial[j] - y[j]);
        }
        if (ftrial <= model + 1e-12 * std::abs(fy) || lipschitz > 1e30) {
          break;
        }
        lipschitz *= 2.0;
      }

      const double exact = objective.exact(trial);
      if (exact < best_cost) {
        best_cost = exact;
        best = trial;
      }
      if (ftrial > fx) {
        if (t == 1.0) {
          break;  // no progress even without momentum
        }
        // Function-value restart: drop momentum and retry from x.
        t = 1.0;
        y = x;
        continue;
      }
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      const double momentum = (t - 1.0) / t_next;
      const double moved = std::sqrt(sq_dist(trial, x));
      for (int j = 0; j < n; ++j) {
        y[j] = trial[j] + momentum * (trial[j] - x[j]);
      }
      project(y);
      x = trial;
      fx = ftrial;
      t = t_next;
      history.push_back(fx);

      const std::size_t h = history.size();
      if (moved <= 1e-12 * extent) {
        break;
      }
      if (h > kPatience &&
          history[h - 1 - kPatience] - fx <= stage_tol * std::max(1.0, std::abs(fx))) {
        break;
      }
    }
  }

  result.points = by_cluster(problem, best);
  result.cost = best_cost;
  result.iterations = iterations;
  result.converged = converged;
  log::logger()->debug("placement: {} iterations, cost {}", iterations, best_cost);
  if (!converged) {
    throw PlacementNonConvergence(std::move(result));
  }
  return result;
}

std::size_t brute_samples(const Area& area, double resolution) {
  if (area.degenerate()) {
    return 1;
  }
  const auto& box = area.disks()[area.tightest()];
  const auto cells = static_cast<std::size_t>(std::ceil(2.0 * box.radius / resolution));
  std::size_t boundary = 0;
  for (const auto& d : area.disks()) {
    boundary += static_cast<std::size_t>(std::ceil(2.0 * M_PI * d.radius / resolution));
  }
  return cells * cells + boundary;
}

namespace {

std::vector<Point> area_samples(const Area& area, double h) {
  if (auto pin = area.pinned_point()) {
    return {*pin};
  }
  std::vector<Point> out;
  const auto& box = area.disks()[area.tightest()];
  const int cells = static_cast<int>(std::ceil(2.0 * box.radius / h));
  const double x0 = box.center.x - 0.5 * cells * h;
  const double y0 = box.center.y - 0.5 * cells * h;
  for (int i = 0; i < cells; ++i) {
    for (int j = 0; j < cells; ++j) {
      const Point p{x0 + (i + 0.5) * h, y0 + (j + 0.5) * h};
      if (area.contains(p, 0.0)) {
        out.push_back(p);
      }
    }
  }
  for (const auto& d : area.disks()) {
    const int m = std::max(4, static_cast<int>(std::ceil(2.0 * M_PI * d.radius / h)));
    for (int i = 0; i < m; ++i) {
      const double a = 2.0 * M_PI * i / m;
      const Point p = d.center + d.radius * Point{std::cos(a), std::sin(a)};
      if (area.contains(p)) {
        out.push_back(p);
      }
    }
  }
  if (out.empty()) {
    out.push_back(area_centroid(area));
  }
  return out;
}

}  // namespace

BruteResult brute_place(const PlacementProblem& problem, double resolution,
                        std::size_t max_evaluations) {
  const int n = problem.size();
  std::vector<std::vector<Point>> samples(n);
  double total = 1.0;
  for (int j = 0; j < n; ++j) {
    total *= static_cast<double>(brute_samples(problem.areas[j], resolution));
  }
  if (total > static_cast<double>(max_evaluations)) {
    throw Error(ErrorCode::GridTooLarge,
                fmt::format("grid search needs {:.3g} evaluations (limit {})", total, max_evaluations));
  }
  for (int j = 0; j < n; ++j) {
    samples[j] = area_samples(problem.areas[j], resolution);
  }

  const Objective objective(problem);
  BruteResult out;
  out.cost = std::numeric_limits<double>::infinity();
  // Grid cells of side h plus boundary arcs of length at most h.
  out.coverage = resolution * (std::sqrt(0.5) + 0.5);
  std::vector<std::size_t> idx(n, 0);
  std::vector<Point> x(n);
  std::vector<Point> best(n);
  for (;;) {
    for (int j = 0; j < n; ++j) {
      x[j] = samples[j][idx[j]];
    }
    const double c = objective.exact(x);
    ++out.evaluated;
    if (c < out.cost) {
      out.cost = c;
      best = x;
    }
    int j = n - 1;
    while (j >= 0 && ++idx[j] == samples[j].size()) {
      idx[j] = 0;
      --j;
    }
    if (j < 0) {
      break;
    }
  }
  out.points = by_cluster(problem, best);
  return out;
}

}  // namespace spacewin
