#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bigm/model.hpp"

namespace bigm {

struct BenchSpec {
  // "sparse", "spp" or "portfolio". For portfolio, n counts binaries (N * w).
  std::string cls = "sparse";
  std::vector<std::size_t> sizes;
  std::vector<std::uint64_t> seeds;
  std::size_t sparsity = 5;
  std::size_t sppElements = 0;  // 0: max(2, n / 2)
  double density = 0.25;
  unsigned w = 3;
  double gamma = 1.0;
  std::int64_t delta = 1;
  // Gap and optimal-M columns are left empty above this size.
  std::size_t bruteForceLimit = 20;
  std::size_t threads = 1;
  bool timings = false;
};

struct BenchmarkRow {
  std::string instanceId;
  std::string cls;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::optional<std::int64_t> mEll1;
  std::optional<std::int64_t> mSdp;
  std::optional<std::int64_t> mOptimal;
  std::optional<double> delta0;
  std::optional<double> deltaEll1;
  std::optional<double> deltaSdp;
  std::optional<double> gapRatio;
  std::optional<std::size_t> sdpIterations;
  std::string sdpStatus;
  std::string feasibleStrategy;
  double sdpSeconds = 0.0;
  double totalSeconds = 0.0;
  std::string error;
};

BenchmarkRow bench_instance(const BenchSpec& spec, std::size_t n, std::uint64_t seed);

// Rows in (size, seed) order regardless of which worker finished first.
std::vector<BenchmarkRow> run_bench(const BenchSpec& spec);

void write_bench_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows, bool timings);

// Default worker count: BIGM_THREADS if set and positive, else the hardware concurrency.
std::size_t default_thread_count();

}  // namespace bigm
