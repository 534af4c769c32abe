#pragma once

#include <optional>
#include <string>
#include <vector>

#include "foldframe/frame.hpp"
#include "foldframe/grouping.hpp"
#include "foldframe/options.hpp"

namespace foldframe {

enum class Stat {
  sum,
  prod,
  mean,
  median,
  mode,
  var,
  sd,
  min,
  max,
  nth,
  first,
  last,
  nobs,
  ndistinct,
};

const char* stat_name(Stat s);
std::optional<Stat> stat_from_name(const std::string& name);

// Row sweep modes: each row is combined with (or replaced by) its group's
// statistic.
enum class SweepOp {
  replace_na,        // "replace_na" / "na"
  replace_fill,      // "replace_fill" / "fill"
  replace,           // "replace"
  subtract,          // "-"
  subtract_add_avg,  // "-+"
  divide,            // "/"
  percent,           // "%"
  add,               // "+"
  multiply,          // "*"
  modulus,           // "%%"
  subtract_modulus,  // "-%%"
};

const char* sweep_name(SweepOp op);
std::optional<SweepOp> sweep_from_name(const std::string& name);

enum class QuantileTies { q7, q8, lower, upper };

// Grouped (optionally weighted) reduction. Returns one row per group, or a
// single row when g is null. When tra is set the computed statistic is
// immediately swept back over the rows instead.
//
// Stat::median dispatches to quantile(p=0.5, q7); Stat::nth requires an
// explicit probability and is rejected here.
Column reduce(Stat stat, const Column& x, const Grouping* g = nullptr,
              const Column* w = nullptr, const StatOptions& opts = {},
              std::optional<SweepOp> tra = std::nullopt);

// Hyndman-Fan type 7/8 quantile with the cumulative-weight generalization:
// at unit weights it reproduces the unweighted estimator, and for integer
// weights it equals the unweighted quantile of the weight-expanded vector.
// ord, when given, must order rows ascending within groups (one overall
// ordering vector); it is consumed to skip per-group sorting.
Column quantile(const Column& x, double p, const Column* w = nullptr,
                QuantileTies ties = QuantileTies::q7, const Grouping* g = nullptr,
                const std::vector<std::int64_t>* ord = nullptr, const StatOptions& opts = {},
                std::optional<SweepOp> tra = std::nullopt);

Column median(const Column& x, const Column* w = nullptr, const Grouping* g = nullptr,
              const std::vector<std::int64_t>* ord = nullptr, const StatOptions& opts = {},
              std::optional<SweepOp> tra = std::nullopt);

// Most frequent value (weighted: largest weight sum); ties resolve to the
// value occurring first in row order. With na_rm=false a missing value is an
// ordinary candidate.
Column mode_stat(const Column& x, const Grouping* g = nullptr, const Column* w = nullptr,
                 const StatOptions& opts = {}, std::optional<SweepOp> tra = std::nullopt);

// Sweeps precomputed per-group statistics over the rows.
Column sweep(const Column& x, const Column& stats, SweepOp op, const Grouping* g = nullptr);

// Mixed-type aggregation: one row per key tuple; numeric columns reduced by
// numeric_stat, text/categorical columns by cat_stat, both weighted by w.
// keep_w inserts the summed weight column "sum.<w>" after the keys.
struct AggregateSpec {
  Stat numeric_stat = Stat::mean;
  Stat cat_stat = Stat::mode;
  bool keep_w = true;
  std::optional<bool> sort;
  StatOptions stat_opts;
};

Frame aggregate(const Frame& frame, const std::vector<std::string>& by,
                const std::optional<std::string>& w = std::nullopt,
                const AggregateSpec& spec = {});

}  // namespace foldframe
