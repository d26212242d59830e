#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spacewin/generator.hpp"

namespace spacewin {

struct BenchOptions {
  std::uint64_t seed = 1;
  double time_cap = 600.0;      // oracle cap per instance, seconds
  std::optional<int> h_max;
  bool run_oracle = true;
  bool omit_timing = false;     // blank the CPU columns so output is reproducible
  int jobs = 1;
};

struct BenchRow {
  std::string instance;
  int passengers = 0;
  int clusters = 0;
  std::optional<double> altmin_cost;
  int hbar = 0;
  double altmin_cpu = 0.0;
  std::optional<double> oracle_cost;
  bool proven = false;
  double oracle_cpu = 0.0;
  std::optional<double> gap;
  std::string error;            // empty when the instance ran
};

// Seed used for instance `index` of a suite run with `seed`.
std::uint64_t instance_seed(std::uint64_t seed, std::size_t index);

// Generates and solves each shape with AltMin and (optionally) the exact
// oracle, on `jobs` worker threads. Rows come back in suite order.
std::vector<BenchRow> run_bench(std::span<const InstanceShape> suite, const BenchOptions& options);

// Diamond: AltMin beat the reference and took less CPU. Asterisk: same cost.
std::string bench_marker(const BenchRow& row, bool omit_timing);

std::string bench_csv(std::span<const BenchRow> rows, bool omit_timing);
std::string bench_table(std::span<const BenchRow> rows, bool omit_timing);

// CPU seconds consumed by the calling thread.
double thread_cpu_seconds();

}  // namespace spacewin
