#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "spacewin/io.hpp"
#include "spacewin/model.hpp"

namespace spacewin {

inline constexpr double kMile = 1609.344;

// Instance dimensions and cost settings in the naming scheme pNN-cMM-k.
struct InstanceShape {
  std::string name;
  int passengers = 6;
  int clusters = 12;
  double gamma2 = 0.0;
  double alpha3 = 0.1;
  double radius_miles = 0.3;
  int mps = 6;
};

// Small-instance rows of the published benchmark settings (n <= 6).
std::vector<InstanceShape> benchmark_shapes();

// Uniform doubles in [0, 1) from mt19937_64. The engine output is fixed by
// the standard but distributions are not, so the conversion is done here.
class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed) : engine_(seed) {}
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double between(double lo, double hi) { return lo + (hi - lo) * next(); }

 private:
  std::mt19937_64 engine_;
};

struct GeneratorOptions {
  double box = 2.0 * kMile;   // side of the square holding all endpoints
  int attempts = 200;         // fresh draws before giving up on a shape
};

// Uniform endpoints in the box, depot at its center, all requests at time 0,
// then closest compatible clusters merged pairwise until `shape.clusters`
// remain. Only patterns with a feasible visit order are accepted.
ScenarioData generate_instance(const InstanceShape& shape, std::uint64_t seed,
                               const GeneratorOptions& options = {});

// Greedy pairwise grouping of a trivial pattern down to `target` clusters.
// Returns false when no feasible merge remains before reaching the target.
bool group_events(ScenarioData& data, int target);

struct ReplayShape {
  int batches = 2;
  int per_batch = 6;
  double interval = 900.0;     // seconds between batch arrivals
  double radius_miles = 0.3;
  int first_clusters = 0;      // grouping target for the first batch; 0 keeps it trivial
};

// A replay whose first batch is the scenario; later batches arrive every
// `interval` seconds with request times equal to their arrival.
ReplayFile generate_replay(const ReplayShape& shape, std::uint64_t seed,
                           const GeneratorOptions& options = {});

}  // namespace spacewin
