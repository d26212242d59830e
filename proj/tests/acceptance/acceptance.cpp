// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance                 all criteria
//   acceptance --criterion N   only criterion N (exit status reflects it)
#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <fmt/format.h>

#include "spacewin/altmin.hpp"
#include "spacewin/bench.hpp"
#include "spacewin/constraints.hpp"
#include "spacewin/cost.hpp"
#include "spacewin/dynamic.hpp"
#include "spacewin/generator.hpp"
#include "spacewin/io.hpp"
#include "spacewin/log.hpp"
#include "spacewin/oracle.hpp"
#include "spacewin/placer.hpp"
#include "spacewin/sequencer.hpp"
#include "support.hpp"

namespace sw = spacewin;
namespace fs = std::filesystem;
using sw::testing::brute_order;
using sw::testing::near;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome report(bool pass, std::string detail) { return {pass, std::move(detail)}; }

// ---------------------------------------------------------------- shared runs

sw::ScenarioData sequencing_scenario(int index) {
  sw::UniformSource rng(sw::instance_seed(1001, index));
  const int n = 2 + index % 3;
  sw::ScenarioData d = sw::testing::random_data(rng, n, 2.0 * sw::kMile, 0.3 * sw::kMile);
  d.config.gamma2 = index % 2;
  d.config.mps_pickup = d.config.mps_dropoff = 1 + index % 4;
  return d;
}

sw::ScenarioData oracle_scenario(int index) {
  sw::InstanceShape shape;
  shape.name = fmt::format("p03-c06-{}", index + 1);
  shape.passengers = 3;
  shape.clusters = 6;
  shape.gamma2 = index % 2;
  shape.radius_miles = index % 4 < 2 ? 0.3 : 0.15;
  shape.mps = index % 3 == 0 ? 2 : 3;
  return sw::generate_instance(shape, sw::instance_seed(1003, index));
}

constexpr int kSequencingRuns = 100;
constexpr int kOracleRuns = 50;

// ---------------------------------------------------------------- criterion 1

Outcome criterion1() {
  const auto t0 = Clock::now();
  int mismatches = 0;
  int orders = 0;
  double worst = 0.0;
  for (int i = 0; i < kSequencingRuns; ++i) {
    const sw::ScenarioData d = sequencing_scenario(i);
    const sw::Scenario s = sw::validate_scenario(d);
    std::vector<sw::Point> centroids;
    for (const auto& a : s.areas()) {
      centroids.push_back(sw::area_centroid(a));
    }
    const auto dp = sw::solve_sequence(centroids, s);
    // Brute force over all permutations, filtered by check_sequence and
    // priced by the reference cost.
    const sw::testing::PatternView view(d);
    std::vector<int> order(s.cluster_count());
    std::iota(order.begin(), order.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
      if (!sw::check_sequence(std::vector<sw::ClusterIndex>(order.begin(), order.end()), s).empty()) {
        continue;
      }
      ++orders;
      best = std::min(best, sw::testing::direct_cost(d, view, order, centroids));
    } while (std::next_permutation(order.begin(), order.end()));
    const auto independent = brute_order(d, centroids);
    const double diff = std::abs(dp.cost - best) / std::max(1.0, best);
    worst = std::max(worst, diff);
    if (!near(dp.cost, best, 1e-9) || !near(independent.cost, best, 1e-9)) {
      ++mismatches;
      fmt::print("  scenario {}: dp {:.9f} brute {:.9f} reference filter {:.9f}\n", i, dp.cost, best,
                 independent.cost);
    }
  }
  const double elapsed = seconds_since(t0);
  return report(mismatches == 0 && elapsed < 10.0,
                fmt::format("{} scenarios, {} feasible orders checked, {} mismatches (max rel diff {:.1e}), "
                            "{:.2f} s (limit 10 s)",
                            kSequencingRuns, orders, mismatches, worst, elapsed));
}

// ---------------------------------------------------------------- criterion 2

// Conservative bound on the objective change when every point moves by at
// most one unit: segment lengths, walks, and departure waits that shift all
// later segments.
double lipschitz(const sw::PlacementProblem& p) {
  double segments = 0.0;
  double total = 0.0;
  for (double m : p.multipliers) {
    segments += 2.0 * m / p.shuttle_speed;
    total += m;
  }
  double walks = 0.0;
  for (const auto& w : p.walks) {
    walks += w.weight / p.walk_speed;
  }
  const double waits = total * (static_cast<double>(p.boardings.size()) / p.walk_speed +
                                2.0 * p.size() / p.shuttle_speed);
  return segments + walks + waits;
}

sw::PlacementProblem placement_problem(int index, double& radius) {
  sw::UniformSource rng(sw::instance_seed(1002, index));
  const int clusters = 1 + index % 3;
  const double box = 1.0 * sw::kMile;
  auto disk_radius = [&] { return rng.between(0.05, 0.3) * sw::kMile; };
  sw::ScenarioData d;
  d.config.gamma2 = index % 2 == 0 ? 1.0 : 0.0;
  d.config.alpha3_pickup = d.config.alpha3_dropoff = rng.between(0.1, 2.0);
  d.depot = {rng.between(0, box), rng.between(0, box)};
  auto far_point = [&](sw::Point from, double gap) {
    sw::Point p;
    do {
      p = {rng.between(0, box), rng.between(0, box)};
    } while (sw::distance(p, from) <= gap);
    return p;
  };
  if (clusters != 2) {
    // Passenger 1 is already aboard and only needs its drop-off.
    sw::RideRequest r;
    r.id = 1;
    r.pickup = {rng.between(0, box), rng.between(0, box)};
    r.dropoff_radius = disk_radius();
    r.dropoff = far_point(r.pickup, r.dropoff_radius);
    d.requests.push_back(r);
    d.onboard.push_back({1, 0.0, 60.0, 1});
    d.pickups_done = 1;
  }
  if (clusters >= 2) {
    sw::RideRequest r;
    r.id = clusters == 2 ? 1 : 2;
    r.pickup = {rng.between(0, box), rng.between(0, box)};
    r.pickup_radius = disk_radius();
    r.dropoff_radius = disk_radius();
    r.dropoff = far_point(r.pickup, r.pickup_radius + r.dropoff_radius);
    d.requests.push_back(r);
  }
  radius = 0.0;
  for (const auto& r : d.requests) {
    radius = std::max({radius, r.pickup_radius, r.dropoff_radius});
  }
  const sw::Scenario s = sw::validate_scenario(std::move(d));
  std::vector<sw::Point> centroids;
  for (const auto& a : s.areas()) {
    centroids.push_back(sw::area_centroid(a));
  }
  return sw::build_placement(sw::solve_sequence(centroids, s).sequence, s);
}

Outcome criterion2() {
  constexpr int kProblems = 50;
  constexpr std::size_t kBudget = 4'000'000;
  const auto t0 = Clock::now();
  int failures = 0;
  double worst_excess = -std::numeric_limits<double>::infinity();
  double coarsest = 0.0;
  for (int i = 0; i < kProblems; ++i) {
    double radius = 0.0;
    const sw::PlacementProblem problem = placement_problem(i, radius);
    // 1e-3 of the disk radius where the grid fits the budget; multi-cluster
    // grids are products of per-area grids and are coarsened until they fit.
    double resolution = 1e-3 * radius;
    auto grid_size = [&] {
      double total = 1.0;
      for (const auto& a : problem.areas) {
        total *= static_cast<double>(sw::brute_samples(a, resolution));
      }
      return total;
    };
    if (problem.size() == 1) {
      resolution = 1e-3 * radius;
    } else {
      while (grid_size() > static_cast<double>(kBudget)) {
        resolution *= 1.1;
      }
    }
    coarsest = std::max(coarsest, resolution / radius);
    const auto brute = sw::brute_place(problem, resolution, problem.size() == 1 ? 100'000'000 : kBudget);
    sw::PlacementResult placed;
    try {
      placed = sw::solve_placement(problem);
    } catch (const sw::PlacementNonConvergence& e) {
      placed = e.best();
    }
    const double allowance = lipschitz(problem) * brute.coverage;
    const double excess = placed.cost - brute.cost;
    worst_excess = std::max(worst_excess, excess / std::max(allowance, 1e-12));
    if (placed.cost > brute.cost + allowance) {
      ++failures;
      fmt::print("  problem {} ({} clusters): placer {:.6f} brute {:.6f} allowance {:.6f}\n", i,
                 problem.size(), placed.cost, brute.cost, allowance);
    }
  }
  const double elapsed = seconds_since(t0);
  return report(failures == 0 && elapsed < 60.0,
                fmt::format("{} problems, {} above brute + Lipschitz allowance (worst excess {:.2f} of the "
                            "allowance); grid 1e-3 r for one cluster, up to {:.3f} r for two or three; "
                            "{:.1f} s (limit 60 s)",
                            kProblems, failures, worst_excess, coarsest, elapsed));
}

// ---------------------------------------------------------------- criterion 3

Outcome criterion3() {
  std::vector<double> gaps;
  int unproven = 0;
  const auto t0 = Clock::now();
  for (int i = 0; i < kOracleRuns; ++i) {
    const sw::Scenario s = sw::validate_scenario(oracle_scenario(i));
    const sw::SolveResult a = sw::solve(s);
    const sw::ExactResult e = sw::solve_exact(s, {600.0, true});
    unproven += !e.proven;
    gaps.push_back(sw::optimality_gap(a.cost, e.cost));
  }
  std::vector<double> sorted = gaps;
  std::sort(sorted.begin(), sorted.end());
  const double median = 0.5 * (sorted[(sorted.size() - 1) / 2] + sorted[sorted.size() / 2]);
  const double max_gap = sorted.back();
  const bool pass = median <= 0.02 && max_gap <= 0.12 && unproven == 0;
  std::string flag;
  if (max_gap > 0.10 && max_gap <= 0.12) {
    flag = " [flagged: max gap above 10%]";
  }
  return report(pass, fmt::format("{} scenarios (n=3, N=6): median gap {:.3f}% (limit 2%), max {:.3f}% "
                                  "(limit 10%, flag to 12%), {} unproven oracle runs, {:.1f} s{}",
                                  kOracleRuns, 100 * median, 100 * max_gap, unproven,
                                  seconds_since(t0), flag));
}

// ---------------------------------------------------------------- criterion 4

Outcome criterion4() {
  int runs = 0;
  int non_monotone = 0;
  int over_cap = 0;
  std::map<int, int> hbar_counts;
  auto check = [&](const sw::Scenario& s) {
    const sw::SolveResult r = sw::solve(s);
    ++runs;
    double last = std::numeric_limits<double>::infinity();
    for (const auto& h : r.history) {
      if (h.repeated) {
        continue;
      }
      if (h.cost > last + s.config().eps_place * std::abs(last)) {
        ++non_monotone;
        break;
      }
      last = h.cost;
    }
    over_cap += r.hbar > s.config().h_max;
    ++hbar_counts[r.hbar];
  };
  for (int i = 0; i < kSequencingRuns; ++i) {
    check(sw::validate_scenario(sequencing_scenario(i)));
  }
  for (int i = 0; i < kOracleRuns; ++i) {
    check(sw::validate_scenario(oracle_scenario(i)));
  }
  const int two_or_three = hbar_counts[2] + hbar_counts[3];
  std::string histogram;
  for (const auto& [h, count] : hbar_counts) {
    if (count > 0) {
      histogram += fmt::format(" {}:{}", h, count);
    }
  }
  const double share = static_cast<double>(two_or_three) / runs;
  return report(non_monotone == 0 && over_cap == 0 && share >= 0.9,
                fmt::format("{} AltMin runs: {} non-monotone, {} over h_max, {:.1f}% end with hbar in "
                            "{{2,3}} (limit 90%); hbar counts{}",
                            runs, non_monotone, over_cap, 100 * share, histogram));
}

// ---------------------------------------------------------------- criterion 5

Outcome criterion5() {
  constexpr int kInstances = 10;
  constexpr double kCap = 600.0;
  const auto shapes = sw::benchmark_shapes();
  std::vector<sw::InstanceShape> twelve;
  for (const auto& s : shapes) {
    if (s.clusters == 12) {
      twelve.push_back(s);
    }
  }
  int slow = 0;
  double worst = 0.0;
  int capped = 0;
  for (int i = 0; i < kInstances; ++i) {
    const sw::InstanceShape& shape = twelve[i % twelve.size()];
    const sw::Scenario s = sw::validate_scenario(sw::generate_instance(shape, sw::instance_seed(1005, i)));
    auto t0 = Clock::now();
    const sw::SolveResult a = sw::solve(s);
    const double altmin_s = seconds_since(t0);
    t0 = Clock::now();
    const sw::ExactResult e = sw::solve_exact(s, {kCap, true});
    const double oracle_s = seconds_since(t0);
    capped += !e.proven;
    const double ratio = altmin_s / oracle_s;
    worst = std::max(worst, ratio);
    slow += ratio > 0.1;
    fmt::print("  {} #{}: altmin {:.3f} s, oracle {:.1f} s{}, ratio {:.2e}, gap {:.3f}%\n", shape.name, i,
               altmin_s, oracle_s, e.proven ? "" : " (cap)", ratio, 100 * sw::optimality_gap(a.cost, e.cost));
    std::fflush(stdout);
  }
  return report(slow == 0, fmt::format("{} instances (n=6, N=12): worst AltMin/oracle wall-time ratio {:.2e} "
                                       "(limit 0.1), {} oracle runs stopped at the {:.0f} s cap",
                                       kInstances, worst, capped, kCap));
}

// ---------------------------------------------------------------- criterion 6

Outcome criterion6() {
  sw::VehicleParams v;
  v.shuttle_speed = 30 * 0.44704;
  v.acceleration = 2.25 * 0.44704;
  v.service_time = 60.0;
  const double ta = v.stop_overhead();
  const double gap1 = 100 * sw::optimality_gap(4.926, 4.538);
  const double gap2 = 100 * sw::optimality_gap(2.914, 2.886);
  const bool ok_ta = std::abs(ta - 66.67) <= 0.01;
  const bool ok1 = std::abs(gap1 - 8.55) <= 0.01;
  const bool ok2 = std::abs(gap2 - 0.96) <= 0.01;
  return report(ok_ta && ok1 && ok2,
                fmt::format("t_a {:.4f} s (66.67 +- 0.01: {}), gap(4.926, 4.538) {:.4f}% (8.55 +- 0.01: {}), "
                            "gap(2.914, 2.886) {:.4f}% (0.96 +- 0.01: {})",
                            ta, ok_ta ? "ok" : "off", gap1, ok1 ? "ok" : "off", gap2, ok2 ? "ok" : "off"));
}

// ---------------------------------------------------------------- criterion 7

bool same_bytes(sw::Point a, sw::Point b) { return std::memcmp(&a, &b, sizeof(sw::Point)) == 0; }

Outcome criterion7() {
  constexpr int kReplays = 20;
  int double_walks = 0;
  int mps_violations = 0;
  int early_departures = 0;
  int errors = 0;
  int plans = 0;
  for (int i = 0; i < kReplays; ++i) {
    sw::ReplayShape shape;
    shape.batches = 2 + i % 2;
    shape.per_batch = 3;
    shape.interval = 300.0 + 150.0 * (i % 4);
    shape.radius_miles = i % 2 == 0 ? 0.3 : 0.15;
    shape.first_clusters = i % 3 == 0 ? 4 : 0;
    sw::ReplayFile replay = sw::generate_replay(shape, sw::instance_seed(1007, i));
    replay.scenario.config.gamma2 = i % 2;
    replay.scenario.config.mps_pickup = replay.scenario.config.mps_dropoff = 3;
    try {
      const sw::Scenario initial = sw::validate_scenario(replay.scenario);
      sw::Dispatcher dispatcher(initial);
      std::map<sw::PassengerId, sw::Point> promised;
      auto record = [&](const sw::ReplanResult& plan, double now) {
        ++plans;
        const sw::Scenario& ps = plan.scenario;
        for (int k = 0; k < ps.passenger_count(); ++k) {
          if (ps.onboard_record(k) != nullptr) {
            continue;
          }
          const sw::Point p = plan.solution.points[ps.pickup_cluster(k)];
          auto [it, fresh] = promised.emplace(ps.requests()[k].id, p);
          if (!fresh && !same_bytes(it->second, p)) {
            ++double_walks;
          }
        }
        for (double t : plan.solution.route.departure_times) {
          early_departures += t < now;
        }
      };
      record(dispatcher.current(), initial.start_time());
      for (const auto& b : replay.batches) {
        record(dispatcher.add_batch(b.time, b.requests, b.clusters), b.time);
      }
      const sw::RealizedPlan done = dispatcher.finish();
      for (const auto& p : done.passengers) {
        if (!same_bytes(p.pickup_point, promised.at(p.id))) {
          ++double_walks;
        }
        mps_violations += std::abs(p.times.pickup_position - p.id) > initial.config().mps_pickup;
        mps_violations += std::abs(p.times.dropoff_position - p.id) > initial.config().mps_dropoff;
      }
    } catch (const std::exception& e) {
      ++errors;
      fmt::print("  replay {}: {}\n", i, e.what());
    }
  }
  return report(double_walks == 0 && mps_violations == 0 && early_departures == 0 && errors == 0,
                fmt::format("{} replays, {} plans: {} moved pickup points, {} MPS violations, {} departures "
                            "before the replan time, {} failed replays",
                            kReplays, plans, double_walks, mps_violations, early_departures, errors));
}

// ---------------------------------------------------------------- criterion 8

Outcome criterion8() {
#ifndef SWROUTE_PATH
  return report(false, "swroute was not built");
#else
  const fs::path dir = fs::temp_directory_path() / "swroute_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  sw::write_file(dir / "suite.json",
                 R"({"instances": [{"n": 2, "N": 4}, {"n": 3, "N": 5, "gamma2": 1}, {"n": 3, "N": 6}]})");
  sw::ReplayShape shape;
  shape.batches = 3;
  shape.per_batch = 3;
  sw::write_file(dir / "replay.json", sw::replay_to_json(sw::generate_replay(shape, 77)));

  struct Command {
    std::string args;
    std::vector<std::string> outputs;
  };
  const std::vector<Command> commands{
      {"solve --random n=4 N=6 --seed 21 --emit-scenario {d}/scenario{k}.json --out {d}/route{k}.json "
       "--geojson {d}/route{k}.geojson --svg {d}/route{k}.svg",
       {"scenario{k}.json", "route{k}.json", "route{k}.geojson", "route{k}.svg"}},
      {"solve --scenario {d}/scenario1.json --out {d}/again{k}.json", {"again{k}.json"}},
      {"bench --suite {d}/suite.json --seed 5 --omit-timing --out {d}/bench{k}.csv", {"bench{k}.csv", "stdout{k}.txt"}},
      {"replay --scenario {d}/replay.json --out {d}/replay{k}.json", {"replay{k}.json"}},
  };
  int differing = 0;
  int failed = 0;
  int compared = 0;
  for (const auto& c : commands) {
    for (int k = 1; k <= 2; ++k) {
      const std::string args = fmt::format(fmt::runtime(c.args), fmt::arg("d", dir.string()), fmt::arg("k", k));
      const std::string cmd = fmt::format("{} {} > {}/stdout{}.txt 2> /dev/null", SWROUTE_PATH, args,
                                          dir.string(), k);
      const int status = std::system(cmd.c_str());
      if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
        ++failed;
        fmt::print("  failed: {}\n", args);
      }
    }
    for (const auto& pattern : c.outputs) {
      const fs::path a = dir / fmt::format(fmt::runtime(pattern), fmt::arg("k", 1));
      const fs::path b = dir / fmt::format(fmt::runtime(pattern), fmt::arg("k", 2));
      ++compared;
      if (!fs::exists(a) || !fs::exists(b) || sw::read_file(a) != sw::read_file(b)) {
        ++differing;
        fmt::print("  differs: {}\n", a.filename().string());
      }
    }
  }
  fs::remove_all(dir);
  return report(differing == 0 && failed == 0,
                fmt::format("{} commands run twice, {} output pairs compared, {} differ, {} runs failed",
                            commands.size(), compared, differing, failed));
#endif
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"phase-1 exactness", criterion1},       {"phase-2 accuracy", criterion2},
      {"altmin vs oracle", criterion3},        {"monotone convergence", criterion4},
      {"speedup", criterion5},                 {"arithmetic anchors", criterion6},
      {"dynamic invariants", criterion7},      {"determinism", criterion8},
  };
  int only = 0;
  if (argc == 3 && std::string(argv[1]) == "--criterion") {
    only = std::atoi(argv[2]);
  } else if (argc != 1) {
    std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
    return 2;
  }
  if (only < 0 || only > static_cast<int>(criteria.size())) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }
  sw::log::logger()->set_level(spdlog::level::err);

  int failures = 0;
  for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) {
    if (only != 0 && i != only) {
      continue;
    }
    Outcome o;
    try {
      o = criteria[i - 1].second();
    } catch (const std::exception& e) {
      o = report(false, fmt::format("error: {}", e.what()));
    }
    failures += !o.pass;
    fmt::print("criterion {} ({}): {}  {}\n", i, criteria[i - 1].first, o.pass ? "PASS" : "FAIL", o.detail);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
