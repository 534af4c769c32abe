#include "bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <random>
#include <stdexcept>

#include "foldframe/join.hpp"
#include "foldframe/pivot.hpp"
#include "foldframe/stats.hpp"

namespace foldframe::cli {

Frame make_matrix_frame(std::int64_t rows, std::int64_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  Frame out;
  for (std::int64_t c = 0; c < cols; ++c) {
    std::vector<double> v(static_cast<size_t>(rows));
    for (auto& x : v) x = dist(rng);
    out.add(Column::f64("V" + std::to_string(c + 1), std::move(v)));
  }
  return out;
}

Column make_group_column(std::int64_t rows, std::int64_t groups, std::uint64_t seed) {
  std::mt19937_64 rng(seed + 7);
  std::uniform_int_distribution<std::int64_t> dist(1, groups);
  std::vector<std::int64_t> g(static_cast<size_t>(rows));
  for (auto& x : g) x = dist(rng);
  return Column::i64("g", std::move(g));
}

Frame make_trips_frame(std::int64_t rows, std::int64_t dests, std::uint64_t seed) {
  std::mt19937_64 rng(seed + 13);
  std::uniform_int_distribution<std::int64_t> month(1, 12), day(1, 28), origin(0, 2),
      dest(0, std::max<std::int64_t>(dests - 1, 0));
  std::normal_distribution<double> delay(10.0, 30.0);
  static const char* origins[] = {"AAA", "BBB", "CCC"};
  std::vector<std::int64_t> m(static_cast<size_t>(rows)), d(static_cast<size_t>(rows));
  std::vector<std::string> o(static_cast<size_t>(rows)), ds(static_cast<size_t>(rows));
  std::vector<double> dep(static_cast<size_t>(rows)), arr(static_cast<size_t>(rows)),
      air(static_cast<size_t>(rows)), dist(static_cast<size_t>(rows)),
      hour(static_cast<size_t>(rows)), minute(static_cast<size_t>(rows));
  for (std::int64_t i = 0; i < rows; ++i) {
    size_t ii = static_cast<size_t>(i);
    m[ii] = month(rng);
    d[ii] = day(rng);
    o[ii] = origins[origin(rng)];
    ds[ii] = "D" + std::to_string(dest(rng));
    dep[ii] = delay(rng);
    arr[ii] = delay(rng);
    air[ii] = 60.0 + delay(rng);
    dist[ii] = 500.0 + 10.0 * delay(rng);
    hour[ii] = static_cast<double>(1 + (i % 23));
    minute[ii] = static_cast<double>(i % 60);
  }
  Frame out;
  out.add(Column::i64("month", std::move(m)));
  out.add(Column::i64("day", std::move(d)));
  out.add(Column::text("origin", std::move(o)));
  out.add(Column::text("dest", std::move(ds)));
  out.add(Column::f64("dep_delay", std::move(dep)));
  out.add(Column::f64("arr_delay", std::move(arr)));
  out.add(Column::f64("air_time", std::move(air)));
  out.add(Column::f64("distance", std::move(dist)));
  out.add(Column::f64("hour", std::move(hour)));
  out.add(Column::f64("minute", std::move(minute)));
  return out;
}

namespace {

template <typename F>
BenchResult time_scenario(const std::string& name, std::int64_t rows, std::int64_t groups,
                          std::int64_t cols, int iters, F&& body) {
  std::vector<double> times;
  times.reserve(static_cast<size_t>(iters));
  for (int it = 0; it < iters; ++it) {
    auto t0 = std::chrono::steady_clock::now();
    body();
    auto t1 = std::chrono::steady_clock::now();
    times.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  std::sort(times.begin(), times.end());
  BenchResult r;
  r.scenario = name;
  r.rows = rows;
  r.groups = groups;
  r.cols = cols;
  r.iters = iters;
  r.min_ms = times.front();
  r.median_ms = times[times.size() / 2];
  return r;
}

}  // namespace

BenchResult run_bench(const std::string& scenario, std::int64_t rows, std::int64_t groups,
                      std::int64_t cols, int iters) {
  if (iters < 5) iters = 5;
  if (scenario == "sum" || scenario == "mean" || scenario == "median") {
    Frame m = make_matrix_frame(rows, cols);
    Column g = make_group_column(rows, groups);
    Grouping grp = group_by(g, false, false);
    Stat stat = scenario == "sum" ? Stat::sum : scenario == "mean" ? Stat::mean : Stat::median;
    StatOptions opts;
    opts.use_group_names = false;
    return time_scenario(scenario, rows, groups, cols, iters, [&] {
      for (const auto& col : m.columns()) {
        Column r = reduce(stat, col, &grp, nullptr, opts);
        (void)r;
      }
    });
  }
  if (scenario == "range") {
    Frame trips = make_trips_frame(rows, groups);
    Grouping grp = group_by(select(trips, {"month", "day", "origin", "dest"}), false, false);
    const Column& x = trips.column("arr_delay");
    StatOptions opts;
    opts.use_group_names = false;
    return time_scenario(scenario, rows, grp.n_groups(), 1, iters, [&] {
      Column hi = reduce(Stat::max, x, &grp, nullptr, opts);
      Column lo = reduce(Stat::min, x, &grp, nullptr, opts);
      Column rng = sweep(hi, lo, SweepOp::subtract, nullptr);
      (void)rng;
    });
  }
  if (scenario == "join") {
    Frame trips = make_trips_frame(rows, groups);
    // dimension table keyed by destination
    std::vector<std::string> dest;
    std::vector<double> size;
    for (std::int64_t k = 0; k < groups; ++k) {
      dest.push_back("D" + std::to_string(k));
      size.push_back(static_cast<double>(k));
    }
    Frame dim;
    dim.add(Column::text("dest", std::move(dest)));
    dim.add(Column::f64("dest_size", std::move(size)));
    JoinSpec spec;
    spec.on = {{"dest", "dest"}};
    spec.verbose = 0;
    spec.x_name = "trips";
    spec.y_name = "dims";
    return time_scenario(scenario, rows, groups, 1, iters, [&] {
      JoinResult r = join(trips, dim, spec);
      (void)r;
    });
  }
  if (scenario == "pivot") {
    Frame trips = make_trips_frame(rows, groups);
    std::vector<std::string> vars = {"dep_delay", "arr_delay", "air_time",
                                     "distance",  "hour",      "minute"};
    PivotSpec longer;
    longer.mode = PivotMode::longer;
    longer.values = vars;
    PivotSpec wider;
    wider.mode = PivotMode::wider;
    wider.ids = {"month", "day", "dest"};
    wider.values = vars;
    wider.names_cols = {"origin"};
    wider.agg = PivotAgg::sum;
    return time_scenario(scenario, rows, groups, 6, iters, [&] {
      Frame l = pivot(trips, longer);
      Frame w = pivot(trips, wider);
      (void)l;
      (void)w;
    });
  }
  throw std::invalid_argument("unknown bench scenario " + scenario);
}

std::string render_bench_table(const std::vector<BenchResult>& results) {
  char line[256];
  std::string out;
  std::snprintf(line, sizeof(line), "%-10s %10s %8s %6s %6s %12s %12s\n", "scenario", "rows",
                "groups", "cols", "iters", "min_ms", "median_ms");
  out += line;
  for (const auto& r : results) {
    std::snprintf(line, sizeof(line), "%-10s %10lld %8lld %6lld %6d %12.3f %12.3f\n",
                  r.scenario.c_str(), static_cast<long long>(r.rows),
                  static_cast<long long>(r.groups), static_cast<long long>(r.cols), r.iters,
                  r.min_ms, r.median_ms);
    out += line;
  }
  return out;
}

}  // namespace foldframe::cli
