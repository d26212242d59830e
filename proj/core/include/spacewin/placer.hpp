#pragma once

#include <optional>
#include <span>
#include <vector>

#include "spacewin/error.hpp"
#include "spacewin/model.hpp"

namespace spacewin {

// Routing-point subproblem for a fixed visit order. Everything is indexed by
// visit position unless stated otherwise.
struct PlacementProblem {
  struct Walk {
    int position = 0;
    Point anchor;        // requested pickup or drop-off point
    double weight = 0;   // cost per second walked
  };
  struct Boarding {
    int position = 0;
    Point anchor;        // where the passenger starts walking
    double release_time = 0;
  };

  std::vector<ClusterIndex> sequence;
  Point start;
  double start_time = 0.0;
  double shuttle_speed = 1.0;
  double walk_speed = 1.0;
  double stop_overhead = 0.0;
  std::vector<Area> areas;
  std::vector<int> waiting;          // passengers not yet picked up while driving segment j
  std::vector<int> riding;           // passengers aboard while driving segment j
  std::vector<double> multipliers;   // cost per second of segment j
  std::vector<Walk> walks;
  std::vector<Boarding> boardings;   // departure coupling
  double constant = 0.0;             // time already spent before the plan starts
  std::vector<Point> initial;
  double eps_place = 1e-4;
  int max_iterations = 50000;

  int size() const { return static_cast<int>(sequence.size()); }
};

// `warm_start` holds points by cluster index; area centroids are used when
// it is absent.
PlacementProblem build_placement(std::span<const ClusterIndex> sequence, const Scenario& scenario,
                                 std::optional<std::span<const Point>> warm_start = std::nullopt);

// Exact objective at points given by position, with optimal departure waits.
double placement_cost(const PlacementProblem& problem, std::span<const Point> by_position);

struct PlacementResult {
  std::vector<Point> points;   // by cluster index
  double cost = 0.0;
  int iterations = 0;
  bool converged = true;
};

class PlacementNonConvergence : public Error {
 public:
  explicit PlacementNonConvergence(PlacementResult best);
  const PlacementResult& best() const { return best_; }

 private:
  PlacementResult best_;
};

// Accelerated projected gradient on a smoothed objective with a decreasing
// smoothing radius. Never returns a point set costing more than the initial
// one. Throws PlacementNonConvergence (holding the best iterate) when the
// iteration cap is reached first.
PlacementResult solve_placement(const PlacementProblem& problem);

struct BruteResult {
  std::vector<Point> points;   // by cluster index
  double cost = 0.0;
  std::size_t evaluated = 0;
  double coverage = 0.0;       // every feasible point is this close to a sample
};

// Exhaustive search over per-area samples: grid points of spacing
// `resolution` plus boundary points at the same spacing. Throws GridTooLarge
// when the product of sample counts exceeds `max_evaluations`.
BruteResult brute_place(const PlacementProblem& problem, double resolution,
                        std::size_t max_evaluations = 50'000'000);

// Number of samples brute_place would take for one area.
std::size_t brute_samples(const Area& area, double resolution);

}  // namespace spacewin
