#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <vector>

namespace spacewin {

inline constexpr double kGeomEps = 1e-6;  // meters

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend constexpr Point operator*(Point a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Point a, Point b) = default;

  Point& operator+=(Point o) {
    x += o.x;
    y += o.y;
    return *this;
  }
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }

// Closed disk of walkable locations around a requested point.
struct SpaceWindow {
  Point center;
  double radius = 0.0;

  bool contains(Point p, double eps = kGeomEps) const {
    return distance(p, center) <= radius + eps;
  }
};

// Feasible stop region of a cluster: the intersection of its member windows.
// Construction does not certify non-emptiness; use `area_nonempty` first.
class Area {
 public:
  Area() = default;
  explicit Area(std::vector<SpaceWindow> disks);
  static Area point(Point p) { return Area({SpaceWindow{p, 0.0}}); }

  std::span<const SpaceWindow> disks() const { return disks_; }

  // Some member window has radius zero, so the area is at most one point.
  bool degenerate() const { return pinned_.has_value(); }
  std::optional<Point> pinned_point() const { return pinned_; }

  bool contains(Point p, double eps = kGeomEps) const;
  // Largest amount by which `p` sits outside any member window (<= 0 inside).
  double violation(Point p) const;
  // Index of the member window with the smallest radius.
  std::size_t tightest() const { return tightest_; }

 private:
  std::vector<SpaceWindow> disks_;
  std::optional<Point> pinned_;
  std::size_t tightest_ = 0;
};

bool area_nonempty(std::span<const SpaceWindow> disks, double eps = kGeomEps);
inline bool area_nonempty(const Area& area, double eps = kGeomEps) {
  return area_nonempty(area.disks(), eps);
}

// Euclidean projection onto a disk intersection. Exact: the nearest point is
// either `x`, the projection onto a single member disk, or a vertex where two
// boundary circles cross, so every such candidate is checked.
Point project_onto_area(Point x, const Area& area);

// Cyclic Dykstra projection over the member disks. Slower than
// `project_onto_area`; kept as an independent route for cross-checking.
Point project_dykstra(Point x, const Area& area, double tol = kGeomEps,
                      int max_sweeps = 100000);

// Centroid of the area estimated on a fixed 256x256 grid over the bounding
// box of the tightest window. Falls back to projecting the mean of the
// centers when no grid point lands inside (sliver intersections).
Point area_centroid(const Area& area);

// Lower bound on the distance between two areas using every pair of member
// windows.
double area_distance_lower_bound(const Area& a, const Area& b);

// Intersection points of two circles (0, 1 or 2 of them). Tangencies within
// `eps` report the touching point.
std::vector<Point> circle_intersections(const SpaceWindow& a, const SpaceWindow& b,
                                        double eps = kGeomEps);

}  // namespace spacewin
