#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "foldframe/frame.hpp"

namespace foldframe::cli {

struct BenchResult {
  std::string scenario;
  std::int64_t rows = 0;
  std::int64_t groups = 0;
  std::int64_t cols = 0;
  int iters = 0;
  double min_ms = 0.0;
  double median_ms = 0.0;
};

// Synthetic inputs for the benchmark scenarios.
Frame make_matrix_frame(std::int64_t rows, std::int64_t cols, std::uint64_t seed = 101);
Column make_group_column(std::int64_t rows, std::int64_t groups, std::uint64_t seed = 101);
// Trip-shaped table: month/day/origin/dest keys plus numeric measures.
Frame make_trips_frame(std::int64_t rows, std::int64_t dests, std::uint64_t seed = 101);

BenchResult run_bench(const std::string& scenario, std::int64_t rows, std::int64_t groups,
                      std::int64_t cols, int iters);

std::string render_bench_table(const std::vector<BenchResult>& results);

}  // namespace foldframe::cli
