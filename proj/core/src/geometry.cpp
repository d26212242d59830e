#include "spacewin/geometry.hpp"

#include <algorithm>
#include <limits>

#include "spacewin/log.hpp"

namespace spacewin {

namespace {

// Tolerance for "already inside" shortcuts; far below kGeomEps so that
// idempotence survives rounding on the boundary.
constexpr double kInsideEps = 1e-9;

Point project_onto_disk(Point x, const SpaceWindow& d) {
  const Point v = x - d.center;
  const double len = norm(v);
  if (len <= d.radius) {
    return x;
  }
  if (d.radius == 0.0) {
    return d.center;
  }
  return d.center + (d.radius / len) * v;
}

bool inside_all(Point p, std::span<const SpaceWindow> disks, double eps) {
  return std::all_of(disks.begin(), disks.end(),
                     [&](const SpaceWindow& d) { return d.contains(p, eps); });
}

}  // namespace

Area::Area(std::vector<SpaceWindow> disks) : disks_(std::move(disks)) {
  for (std::size_t i = 0; i < disks_.size(); ++i) {
    if (disks_[i].radius < disks_[tightest_].radius) {
      tightest_ = i;
    }
    if (disks_[i].radius == 0.0 && !pinned_) {
      pinned_ = disks_[i].center;
    }
  }
}

bool Area::contains(Point p, double eps) const { return inside_all(p, disks_, eps); }

double Area::violation(Point p) const {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& d : disks_) {
    worst = std::max(worst, distance(p, d.center) - d.radius);
  }
  return worst;
}

std::vector<Point> circle_intersections(const SpaceWindow& a, const SpaceWindow& b,
                                        double eps) {
  const Point delta = b.center - a.center;
  const double d = norm(delta);
  if (d == 0.0) {
    return {};
  }
  if (d > a.radius + b.radius + eps || d < std::abs(a.radius - b.radius) - eps) {
    return {};
  }
  const Point u = (1.0 / d) * delta;
  const double along = std::clamp((d * d + a.radius * a.radius - b.radius * b.radius) / (2.0 * d),
                                  -a.radius, a.radius);
  const double h2 = a.radius * a.radius - along * along;
  const Point base = a.center + along * u;
  if (h2 <= 0.0) {
    return {base};
  }
  const double h = std::sqrt(h2);
  const Point perp{-u.y, u.x};
  return {base + h * perp, base - h * perp};
}

bool area_nonempty(std::span<const SpaceWindow> disks, double eps) {
  if (disks.empty()) {
    return false;
  }
  // The leftmost point of a nonempty intersection is either the leftmost
  // point of one disk or a crossing of two boundary circles.
  for (const auto& d : disks) {
    if (inside_all(d.center - Point{d.radius, 0.0}, disks, eps)) {
      return true;
    }
  }
  for (std::size_t i = 0; i < disks.size(); ++i) {
    for (std::size_t j = i + 1; j < disks.size(); ++j) {
      for (Point p : circle_intersections(disks[i], disks[j], eps)) {
        if (inside_all(p, disks, eps)) {
          return true;
        }
      }
    }
  }
  return false;
}

Point project_onto_area(Point x, const Area& area) {
  const auto disks = area.disks();
  if (auto pin = area.pinned_point()) {
    return *pin;
  }
  if (disks.size() == 1) {
    return project_onto_disk(x, disks[0]);
  }
  if (inside_all(x, disks, kInsideEps)) {
    return x;
  }

  Point best = x;
  double best_dist = std::numeric_limits<double>::infinity();
  auto consider = [&](Point p) {
    if (!inside_all(p, disks, kGeomEps)) {
      return;
    }
    const double dist = distance(p, x);
    if (dist < best_dist) {
      best_dist = dist;
      best = p;
    }
  };
  for (const auto& d : disks) {
    consider(project_onto_disk(x, d));
  }
  for (std::size_t i = 0; i < disks.size(); ++i) {
    for (std::size_t j = i + 1; j < disks.size(); ++j) {
      for (Point p : circle_intersections(disks[i], disks[j])) {
        consider(p);
      }
    }
  }
  if (best_dist == std::numeric_limits<double>::infinity()) {
    return project_dykstra(x, area);
  }
  return best;
}

Point project_dykstra(Point x, const Area& area, double tol, int max_sweeps) {
  const auto disks = area.disks();
  if (auto pin = area.pinned_point()) {
    return *pin;
  }
  std::vector<Point> increments(disks.size());
  Point y = x;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const Point start = y;
    for (std::size_t i = 0; i < disks.size(); ++i) {
      const Point shifted = y + increments[i];
      const Point z = project_onto_disk(shifted, disks[i]);
      increments[i] = shifted - z;
      y = z;
    }
    if (distance(y, start) < tol) {
      break;
    }
  }
  return y;
}

Point area_centroid(const Area& area) {
  if (auto pin = area.pinned_point()) {
    return *pin;
  }
  constexpr int kGrid = 256;
  const auto disks = area.disks();
  const SpaceWindow& box = disks[area.tightest()];
  const double cell = 2.0 * box.radius / kGrid;
  Point sum{0.0, 0.0};
  long count = 0;
  for (int i = 0; i < kGrid; ++i) {
    const double x = box.center.x - box.radius + (i + 0.5) * cell;
    for (int j = 0; j < kGrid; ++j) {
      const Point p{x, box.center.y - box.radius + (j + 0.5) * cell};
      if (inside_all(p, disks, 0.0)) {
        sum += p;
        ++count;
      }
    }
  }
  if (count > 0) {
    return (1.0 / static_cast<double>(count)) * sum;
  }
  Point mean{0.0, 0.0};
  for (const auto& d : disks) {
    mean += d.center;
  }
  mean = (1.0 / static_cast<double>(disks.size())) * mean;
  log::logger()->warn("centroid grid missed a sliver area of {} windows; using projected mean",
                      disks.size());
  return project_onto_area(mean, area);
}

double area_distance_lower_bound(const Area& a, const Area& b) {
  double bound = 0.0;
  for (const auto& da : a.disks()) {
    for (const auto& db : b.disks()) {
      bound = std::max(bound, distance(da.center, db.center) - da.radius - db.radius);
    }
  }
  return bound;
}

}  // namespace spacewin
