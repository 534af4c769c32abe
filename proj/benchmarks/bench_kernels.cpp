#include <benchmark/benchmark.h>

#include "bench.hpp"
#include "foldframe/join.hpp"
#include "foldframe/pivot.hpp"
#include "foldframe/stats.hpp"

using namespace foldframe;

namespace {

// grouped column reductions over a rows x cols matrix frame with G groups
void BM_GroupedReduce(benchmark::State& state, Stat stat) {
  std::int64_t rows = state.range(0);
  std::int64_t cols = state.range(1);
  std::int64_t groups = state.range(2);
  Frame m = cli::make_matrix_frame(rows, cols);
  Grouping g = group_by(cli::make_group_column(rows, groups), false, false);
  StatOptions opts;
  opts.use_group_names = false;
  for (auto _ : state) {
    for (const auto& col : m.columns()) {
      Column r = reduce(stat, col, &g, nullptr, opts);
      benchmark::DoNotOptimize(r);
    }
  }
  state.SetItemsProcessed(state.iterations() * rows * cols);
}

void BM_GroupedSum(benchmark::State& state) { BM_GroupedReduce(state, Stat::sum); }
void BM_GroupedMean(benchmark::State& state) { BM_GroupedReduce(state, Stat::mean); }
void BM_GroupedMedian(benchmark::State& state) { BM_GroupedReduce(state, Stat::median); }

void BM_GroupedRange(benchmark::State& state) {
  std::int64_t rows = state.range(0);
  Frame trips = cli::make_trips_frame(rows, 100);
  Grouping g = group_by(select(trips, {"month", "day", "origin", "dest"}), false, false);
  const Column& x = trips.column("arr_delay");
  StatOptions opts;
  opts.use_group_names = false;
  for (auto _ : state) {
    Column hi = reduce(Stat::max, x, &g, nullptr, opts);
    Column lo = reduce(Stat::min, x, &g, nullptr, opts);
    Column rng = sweep(hi, lo, SweepOp::subtract, nullptr);
    benchmark::DoNotOptimize(rng);
  }
  state.SetItemsProcessed(state.iterations() * rows);
}

void BM_FirstMatchJoin(benchmark::State& state) {
  std::int64_t rows = state.range(0);
  std::int64_t dests = state.range(1);
  Frame trips = cli::make_trips_frame(rows, dests);
  std::vector<std::string> dest;
  std::vector<double> size;
  for (std::int64_t k = 0; k < dests; ++k) {
    dest.push_back("D" + std::to_string(k));
    size.push_back(static_cast<double>(k));
  }
  Frame dim;
  dim.add(Column::text("dest", std::move(dest)));
  dim.add(Column::f64("dest_size", std::move(size)));
  JoinSpec spec;
  spec.on = {{"dest", "dest"}};
  spec.verbose = 0;
  for (auto _ : state) {
    JoinResult r = join(trips, dim, spec);
    benchmark::DoNotOptimize(r.frame);
  }
  state.SetItemsProcessed(state.iterations() * rows);
}

void BM_PivotLonger(benchmark::State& state) {
  std::int64_t rows = state.range(0);
  Frame trips = cli::make_trips_frame(rows, 100);
  PivotSpec spec;
  spec.mode = PivotMode::longer;
  spec.values = {"dep_delay", "arr_delay", "air_time", "distance", "hour", "minute"};
  for (auto _ : state) {
    Frame l = pivot(trips, spec);
    benchmark::DoNotOptimize(l);
  }
  state.SetItemsProcessed(state.iterations() * rows * 6);
}

void BM_PivotWiderSum(benchmark::State& state) {
  std::int64_t rows = state.range(0);
  Frame trips = cli::make_trips_frame(rows, 100);
  PivotSpec spec;
  spec.mode = PivotMode::wider;
  spec.ids = {"month", "day", "dest"};
  spec.values = {"dep_delay", "arr_delay", "air_time", "distance", "hour", "minute"};
  spec.names_cols = {"origin"};
  spec.agg = PivotAgg::sum;
  for (auto _ : state) {
    Frame w = pivot(trips, spec);
    benchmark::DoNotOptimize(w);
  }
  state.SetItemsProcessed(state.iterations() * rows * 6);
}

}  // namespace

BENCHMARK(BM_GroupedSum)->Args({10000, 100, 1000})->Args({10000, 1000, 1000})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GroupedMean)->Args({10000, 100, 1000})->Args({10000, 1000, 1000})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GroupedMedian)->Args({10000, 100, 1000})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GroupedRange)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FirstMatchJoin)->Args({100000, 1000})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PivotLonger)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PivotWiderSum)->Arg(100000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
