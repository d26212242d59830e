#include "spacewin/bench.hpp"

#include <atomic>
#include <cmath>
#include <ctime>
#include <thread>

#include <fmt/format.h>

#include "spacewin/altmin.hpp"
#include "spacewin/log.hpp"
#include "spacewin/oracle.hpp"

namespace spacewin {

namespace {

constexpr double kSameCost = 1e-6;

BenchRow run_one(const InstanceShape& shape, std::uint64_t seed, const BenchOptions& options) {
  BenchRow row;
  row.instance = shape.name;
  row.passengers = shape.passengers;
  row.clusters = shape.clusters;
  try {
    const Scenario scenario = validate_scenario(generate_instance(shape, seed));
    AltMinOptions altmin;
    altmin.h_max = options.h_max;
    double t0 = thread_cpu_seconds();
    const SolveResult solved = solve(scenario, altmin);
    row.altmin_cpu = thread_cpu_seconds() - t0;
    row.altmin_cost = solved.cost;
    row.hbar = solved.hbar;
    if (options.run_oracle) {
      t0 = thread_cpu_seconds();
      const ExactResult exact = solve_exact(scenario, {options.time_cap, true});
      row.oracle_cpu = thread_cpu_seconds() - t0;
      row.oracle_cost = exact.cost;
      row.proven = exact.proven;
      row.gap = optimality_gap(solved.cost, exact.cost);
    }
  } catch (const std::exception& e) {
    row.error = e.what();
    log::logger()->warn("bench: {} failed: {}", shape.name, e.what());
  }
  return row;
}

std::string number(const std::optional<double>& v, int digits) {
  return v ? fmt::format("{:.{}f}", *v, digits) : std::string();
}

}  // namespace

double thread_cpu_seconds() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) + 1e-9 * static_cast<double>(ts.tv_nsec);
}

std::uint64_t instance_seed(std::uint64_t seed, std::size_t index) {
  return seed * 0x9E3779B97F4A7C15ULL + index;
}

std::vector<BenchRow> run_bench(std::span<const InstanceShape> suite, const BenchOptions& options) {
  std::vector<BenchRow> rows(suite.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < suite.size(); i = next++) {
      rows[i] = run_one(suite[i], instance_seed(options.seed, i), options);
    }
  };
  const int jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(suite.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int j = 0; j < jobs; ++j) {
      pool.emplace_back(worker);
    }
  }
  return rows;
}

std::string bench_marker(const BenchRow& row, bool omit_timing) {
  if (!row.gap) {
    return "";
  }
  if (std::abs(*row.gap) <= kSameCost) {
    return "*";
  }
  if (*row.gap < 0.0 && (omit_timing || row.altmin_cpu < row.oracle_cpu)) {
    return "<>";
  }
  return "";
}

std::string bench_csv(std::span<const BenchRow> rows, bool omit_timing) {
  std::string out = "instance,n,N,altmin_cost,hbar,altmin_cpu_s,oracle_cost,proven,oracle_cpu_s,gap\n";
  for (const auto& r : rows) {
    const bool ok = r.error.empty();
    out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", r.instance, r.passengers, r.clusters,
                       number(r.altmin_cost, 3), ok ? fmt::format("{}", r.hbar) : "",
                       ok && !omit_timing ? fmt::format("{:.3f}", r.altmin_cpu) : "",
                       number(r.oracle_cost, 3), r.oracle_cost ? (r.proven ? "1" : "0") : "",
                       r.oracle_cost && !omit_timing ? fmt::format("{:.3f}", r.oracle_cpu) : "",
                       r.gap ? fmt::format("{:.4f}", *r.gap * 100.0) : "");
  }
  return out;
}

std::string bench_table(std::span<const BenchRow> rows, bool omit_timing) {
  std::string out = fmt::format("{:<12} {:>3} {:>3} {:>12} {:>5} {:>9} {:>12} {:>6} {:>9} {:>9} {}\n",
                                "instance", "n", "N", "altmin", "hbar", "cpu_s", "oracle", "proven",
                                "cpu_s", "gap_%", "");
  std::vector<std::string> failures;
  for (const auto& r : rows) {
    auto timing = [&](double v, bool present) {
      return present && !omit_timing ? fmt::format("{:.3f}", v) : std::string("-");
    };
    auto shown = [](const std::string& s) { return s.empty() ? std::string("-") : s; };
    out += fmt::format("{:<12} {:>3} {:>3} {:>12} {:>5} {:>9} {:>12} {:>6} {:>9} {:>9} {}\n",
                       r.instance, r.passengers, r.clusters, shown(number(r.altmin_cost, 3)),
                       r.error.empty() ? fmt::format("{}", r.hbar) : "-",
                       timing(r.altmin_cpu, r.error.empty()), shown(number(r.oracle_cost, 3)),
                       r.oracle_cost ? (r.proven ? "yes" : "no") : "-",
                       timing(r.oracle_cpu, r.oracle_cost.has_value()),
                       r.gap ? fmt::format("{:.2f}", *r.gap * 100.0) : "-", bench_marker(r, omit_timing));
    if (!r.error.empty()) {
      failures.push_back(fmt::format("{}: {}", r.instance, r.error));
    }
  }
  for (const auto& f : failures) {
    out += "failed " + f + "\n";
  }
  return out;
}

}  // namespace spacewin
