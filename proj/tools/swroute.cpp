// swroute: solve, benchmark and replay shuttle routing instances.
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "spacewin/altmin.hpp"
#include "spacewin/bench.hpp"
#include "spacewin/dynamic.hpp"
#include "spacewin/generator.hpp"
#include "spacewin/io.hpp"
#include "spacewin/oracle.hpp"

namespace sw = spacewin;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitInfeasible = 3;

struct Common {
  std::string scenario;
  std::string out;
  std::uint64_t seed = 1;
  double time_cap = 600.0;
  std::optional<int> h_max;
};

// "n=6 N=12 r=0.3" style key=value tokens.
sw::InstanceShape random_shape(const std::vector<std::string>& tokens) {
  sw::InstanceShape shape;
  for (const auto& t : tokens) {
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw sw::Error(sw::ErrorCode::InvalidConfig, fmt::format("expected key=value, got '{}'", t));
    }
    const std::string key = t.substr(0, eq);
    const double value = std::stod(t.substr(eq + 1));
    if (key == "n") {
      shape.passengers = static_cast<int>(value);
    } else if (key == "N") {
      shape.clusters = static_cast<int>(value);
    } else if (key == "r") {
      shape.radius_miles = value;
    } else if (key == "gamma2") {
      shape.gamma2 = value;
    } else if (key == "alpha3") {
      shape.alpha3 = value;
    } else if (key == "mps") {
      shape.mps = static_cast<int>(value);
    } else {
      throw sw::Error(sw::ErrorCode::InvalidConfig, fmt::format("unknown shape key '{}'", key));
    }
  }
  shape.name = fmt::format("p{:02}-c{:02}-r", shape.passengers, shape.clusters);
  return shape;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    sw::write_file(path, text);
  }
}

std::vector<sw::InstanceShape> read_suite(const std::string& path) {
  const json doc = json::parse(sw::read_file(path));
  std::vector<sw::InstanceShape> suite;
  for (const auto& s : doc.at("instances")) {
    sw::InstanceShape shape;
    shape.passengers = s.value("n", shape.passengers);
    shape.clusters = s.value("N", shape.clusters);
    shape.gamma2 = s.value("gamma2", shape.gamma2);
    shape.alpha3 = s.value("alpha3", shape.alpha3);
    shape.radius_miles = s.value("r", shape.radius_miles);
    shape.mps = s.value("mps", shape.mps);
    shape.name = s.value("name", fmt::format("p{:02}-c{:02}-{}", shape.passengers, shape.clusters,
                                             suite.size() + 1));
    suite.push_back(std::move(shape));
  }
  return suite;
}

int cmd_solve(const Common& c, const std::vector<std::string>& random, const std::string& emit_scenario,
              const std::string& geojson, const std::string& svg, bool oracle) {
  sw::ScenarioData data;
  if (!random.empty()) {
    data = sw::generate_instance(random_shape(random), c.seed);
    if (!emit_scenario.empty()) {
      sw::write_file(emit_scenario, sw::scenario_to_json(data));
    }
  } else if (!c.scenario.empty()) {
    data = sw::parse_scenario(sw::read_file(c.scenario));
  } else {
    std::cerr << "solve needs --scenario or --random\n";
    return kExitValidation;
  }
  const sw::Scenario scenario = sw::validate_scenario(std::move(data));
  sw::AltMinOptions options;
  options.h_max = c.h_max;
  const sw::SolveResult result = sw::solve(scenario, options);
  emit(c.out, sw::route_to_json(result.route, scenario, &result));
  if (!geojson.empty()) {
    sw::write_file(geojson, sw::route_geojson(result.route, scenario));
  }
  if (!svg.empty()) {
    sw::write_file(svg, sw::route_svg(result.route, scenario));
  }
  if (oracle) {
    const sw::ExactResult exact = sw::solve_exact(scenario, {c.time_cap, true});
    std::cerr << fmt::format("altmin {:.3f}  oracle {:.3f} ({})  gap {:.2f}%\n", result.cost, exact.cost,
                             exact.proven ? "proven" : "time cap", 100.0 * sw::optimality_gap(result.cost, exact.cost));
  }
  return 0;
}

int cmd_bench(const Common& c, const std::string& suite_path, bool no_oracle, bool omit_timing, int jobs) {
  const std::vector<sw::InstanceShape> suite =
      suite_path.empty() ? sw::benchmark_shapes() : read_suite(suite_path);
  sw::BenchOptions options;
  options.seed = c.seed;
  options.time_cap = c.time_cap;
  options.h_max = c.h_max;
  options.run_oracle = !no_oracle;
  options.omit_timing = omit_timing;
  options.jobs = jobs;
  const auto rows = sw::run_bench(suite, options);
  if (c.out.empty()) {
    std::cout << sw::bench_csv(rows, omit_timing);
  } else {
    sw::write_file(c.out, sw::bench_csv(rows, omit_timing));
    std::cout << sw::bench_table(rows, omit_timing);
  }
  return 0;
}

json passenger_json(const sw::RealizedPassenger& p) {
  return {{"id", p.id},
          {"pickup_point", {p.pickup_point.x, p.pickup_point.y}},
          {"dropoff_point", {p.dropoff_point.x, p.dropoff_point.y}},
          {"wait", p.times.wait},
          {"ride", p.times.ride},
          {"walk_pickup", p.times.walk_pickup},
          {"walk_dropoff", p.times.walk_dropoff},
          {"pickup_time", p.pickup_time},
          {"dropoff_time", p.dropoff_time},
          {"pickup_position", p.times.pickup_position},
          {"dropoff_position", p.times.dropoff_position}};
}

int cmd_replay(const Common& c) {
  if (c.scenario.empty()) {
    std::cerr << "replay needs --scenario\n";
    return kExitValidation;
  }
  const sw::ReplayFile replay = sw::parse_replay(sw::read_file(c.scenario));
  const sw::Scenario initial = sw::validate_scenario(replay.scenario);
  sw::AltMinOptions options;
  options.h_max = c.h_max;

  sw::Dispatcher dispatcher(initial, options);
  double last = initial.start_time();
  for (const auto& b : replay.batches) {
    if (b.time < last) {
      throw sw::ValidationError({{sw::ErrorCode::RequestOrder, "replay batches must be in time order"}});
    }
    last = b.time;
    dispatcher.add_batch(b.time, b.requests, b.clusters);
  }
  std::vector<double> times{initial.start_time()};
  for (const auto& b : replay.batches) {
    times.push_back(b.time);
  }

  json plans = json::array();
  const auto all = dispatcher.plans();
  for (std::size_t i = 0; i < all.size(); ++i) {
    plans.push_back({{"time", times[i]},
                     {"route", json::parse(sw::route_to_json(all[i].solution.route, all[i].scenario,
                                                             &all[i].solution))}});
  }
  const sw::RealizedPlan realized = dispatcher.finish();
  json passengers = json::array();
  for (const auto& p : realized.passengers) {
    passengers.push_back(passenger_json(p));
  }
  std::vector<std::pair<double, std::vector<sw::RideRequest>>> batches;
  for (const auto& b : replay.batches) {
    batches.emplace_back(b.time, b.requests);
  }
  const sw::SequentialResult sequential = sw::serve_sequentially(initial, batches, options);

  json doc;
  doc["plans"] = std::move(plans);
  doc["realized"] = {{"cost",
                      {{"total", realized.cost.total},
                       {"shuttle", realized.cost.shuttle},
                       {"wait", realized.cost.wait},
                       {"ride", realized.cost.ride},
                       {"walk_pickup", realized.cost.walk_pickup},
                       {"walk_dropoff", realized.cost.walk_dropoff}}},
                     {"stops", realized.stops.size()},
                     {"per_passenger", std::move(passengers)}};
  doc["sequential_cost"] = sequential.cost;
  emit(c.out, doc.dump(2) + "\n");
  std::cerr << fmt::format("{} plans, realized cost {:.3f}, sequential {:.3f}\n", all.size(),
                           realized.cost.total, sequential.cost);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shuttle routing with space windows"};
  app.require_subcommand(1);
  Common common;
  std::optional<int> hmax;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--scenario", common.scenario, "Scenario (or replay) JSON file");
    sub->add_option("--out", common.out, "Output file (stdout when omitted)");
    sub->add_option("--seed", common.seed, "Seed for generated instances");
    sub->add_option("--time-cap", common.time_cap, "Oracle wall-time cap in seconds");
    sub->add_option("--hmax", hmax, "Maximum AltMin iterations");
  };

  auto* solve = app.add_subcommand("solve", "Solve one instance with AltMin");
  add_common(solve);
  std::vector<std::string> random;
  std::string emit_scenario, geojson, svg;
  bool oracle = false;
  solve->add_option("--random", random, "Generate an instance, e.g. --random n=6 N=12")->expected(1, -1);
  solve->add_option("--emit-scenario", emit_scenario, "Write the generated instance here");
  solve->add_option("--geojson", geojson, "Write the route as GeoJSON");
  solve->add_option("--svg", svg, "Write the route as SVG");
  solve->add_flag("--oracle", oracle, "Also run the exact oracle and report the gap");

  auto* bench = app.add_subcommand("bench", "Compare AltMin with the exact oracle");
  add_common(bench);
  std::string suite;
  bool no_oracle = false;
  bool omit_timing = false;
  int jobs = 1;
  bench->add_option("--suite", suite, "Suite JSON ({\"instances\": [{n, N, gamma2, alpha3, r, mps}]})");
  bench->add_flag("--no-oracle", no_oracle, "Skip the exact oracle");
  bench->add_flag("--omit-timing", omit_timing, "Leave CPU columns blank");
  bench->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* replay = app.add_subcommand("replay", "Replay request batches with replanning");
  add_common(replay);

  CLI11_PARSE(app, argc, argv);
  common.h_max = hmax;

  try {
    if (solve->parsed()) {
      return cmd_solve(common, random, emit_scenario, geojson, svg, oracle);
    }
    if (bench->parsed()) {
      return cmd_bench(common, suite, no_oracle, omit_timing, jobs);
    }
    return cmd_replay(common);
  } catch (const sw::ValidationError& e) {
    for (const auto& issue : e.issues()) {
      std::cerr << sw::to_string(issue.code) << ": " << issue.message << "\n";
    }
    return kExitValidation;
  } catch (const sw::Error& e) {
    std::cerr << e.what() << "\n";
    switch (e.code()) {
      case sw::ErrorCode::InfeasiblePattern:
      case sw::ErrorCode::FrozenPointConflict:
        return kExitInfeasible;
      case sw::ErrorCode::NonConvergence:
        return 1;
      default:
        return kExitValidation;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
