#include <benchmark/benchmark.h>

#include "spacewin/altmin.hpp"
#include "spacewin/generator.hpp"
#include "spacewin/geometry.hpp"
#include "spacewin/log.hpp"
#include "spacewin/oracle.hpp"
#include "spacewin/placer.hpp"
#include "spacewin/sequencer.hpp"

namespace sw = spacewin;

namespace {

sw::Scenario instance(int passengers, int clusters, double gamma2 = 1.0) {
  sw::log::logger()->set_level(spdlog::level::err);
  sw::InstanceShape shape;
  shape.name = "bench";
  shape.passengers = passengers;
  shape.clusters = clusters;
  shape.gamma2 = gamma2;
  return sw::validate_scenario(sw::generate_instance(shape, 12345));
}

std::vector<sw::Point> centroids(const sw::Scenario& s) {
  std::vector<sw::Point> out;
  for (const auto& a : s.areas()) {
    out.push_back(sw::area_centroid(a));
  }
  return out;
}

// Args: passengers, clusters.
void BM_SolveSequence(benchmark::State& state) {
  const sw::Scenario s = instance(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const auto points = centroids(s);
  std::size_t states = 0;
  for (auto _ : state) {
    const auto r = sw::solve_sequence(points, s);
    states = r.states;
    benchmark::DoNotOptimize(r.cost);
  }
  state.counters["states"] = static_cast<double>(states);
}
BENCHMARK(BM_SolveSequence)->Args({3, 6})->Args({4, 8})->Args({6, 12})->Args({8, 16})->Unit(benchmark::kMillisecond);

void BM_SolvePlacement(benchmark::State& state) {
  const sw::Scenario s = instance(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const auto problem = sw::build_placement(sw::solve_sequence(centroids(s), s).sequence, s);
  int iterations = 0;
  for (auto _ : state) {
    const auto r = sw::solve_placement(problem);
    iterations = r.iterations;
    benchmark::DoNotOptimize(r.cost);
  }
  state.counters["placer_iterations"] = iterations;
}
BENCHMARK(BM_SolvePlacement)->Args({3, 6})->Args({6, 12})->Args({8, 16})->Unit(benchmark::kMillisecond);

void BM_AltMin(benchmark::State& state) {
  const sw::Scenario s = instance(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)),
                                  static_cast<double>(state.range(2)));
  int hbar = 0;
  for (auto _ : state) {
    const auto r = sw::solve(s);
    hbar = r.hbar;
    benchmark::DoNotOptimize(r.cost);
  }
  state.counters["hbar"] = hbar;
}
BENCHMARK(BM_AltMin)
    ->Args({3, 6, 1})
    ->Args({6, 7, 1})
    ->Args({6, 12, 0})
    ->Args({6, 12, 1})
    ->Args({8, 16, 1})
    ->Unit(benchmark::kMillisecond);

void BM_ExactOracle(benchmark::State& state) {
  const sw::Scenario s = instance(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  std::size_t placements = 0;
  for (auto _ : state) {
    const auto r = sw::solve_exact(s, {600.0, true});
    placements = r.placements;
    benchmark::DoNotOptimize(r.cost);
  }
  state.counters["placements"] = static_cast<double>(placements);
}
BENCHMARK(BM_ExactOracle)->Args({2, 4})->Args({3, 6})->Unit(benchmark::kMillisecond);

void BM_ProjectOntoArea(benchmark::State& state) {
  const sw::Area area({sw::SpaceWindow{{0, 0}, 500}, sw::SpaceWindow{{600, 0}, 400}, sw::SpaceWindow{{300, 250}, 350}});
  const sw::Point p{-2000, 900};
  for (auto _ : state) {
    benchmark::DoNotOptimize(sw::project_onto_area(p, area));
  }
}
BENCHMARK(BM_ProjectOntoArea);

}  // namespace
BENCHMARK_MAIN();
