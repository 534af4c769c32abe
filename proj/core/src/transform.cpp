#include "foldframe/transform.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace foldframe {

namespace {

double grand_weighted_mean(const Column& x, const Column* w) {
  std::vector<double> xd = x.to_f64();
  double num = 0.0, den = 0.0;
  for (std::int64_t i = 0; i < x.size(); ++i) {
    if (!x.is_valid(i)) continue;
    double wi = 1.0;
    if (w) {
      if (!w->is_valid(i)) continue;
      wi = w->number_at(i);
    }
    num += wi * xd[static_cast<size_t>(i)];
    den += wi;
  }
  return den > 0.0 ? num / den : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

Column scale(const Column& x, const Grouping* g, const Column* w, const StatOptions& opts) {
  if (!x.is_numeric())
    throw std::invalid_argument("scale requires a numeric column, " + x.name() + " is " +
                                kind_name(x.kind()));
  Column mu = reduce(Stat::mean, x, g, w, opts);
  Column sigma = reduce(Stat::sd, x, g, w, opts);
  Column centered = sweep(x, mu, SweepOp::subtract, g);
  // zero variance yields sd 0; dividing gives NaN which normalizes to missing
  return sweep(centered, sigma, SweepOp::divide, g);
}

Column within(const Column& x, const Grouping* g, const Column* w, AddBack add_back,
              const StatOptions& opts) {
  if (!x.is_numeric())
    throw std::invalid_argument("within requires a numeric column, " + x.name() + " is " +
                                kind_name(x.kind()));
  Column mu = reduce(Stat::mean, x, g, w, opts);
  Column centered = sweep(x, mu, SweepOp::subtract, g);
  if (add_back == AddBack::zero) return centered;
  double grand = grand_weighted_mean(x, w);
  std::vector<double> values = centered.to_f64();
  std::vector<std::uint8_t> mask = centered.validity();
  for (auto& v : values) v += grand;
  Column out = Column::f64(x.name(), std::move(values), std::move(mask));
  out.set_label(x.label());
  return out;
}

Column between(const Column& x, const Grouping* g, const Column* w, bool fill,
               const StatOptions& opts) {
  if (!x.is_numeric())
    throw std::invalid_argument("between requires a numeric column, " + x.name() + " is " +
                                kind_name(x.kind()));
  Column mu = reduce(Stat::mean, x, g, w, opts);
  return sweep(x, mu, fill ? SweepOp::replace_fill : SweepOp::replace, g);
}

Column by_apply(const Column& x, const Grouping& g,
                const std::function<Column(const Column&)>& f) {
  if (g.nrow() != x.size())
    throw std::invalid_argument("grouping covers " + std::to_string(g.nrow()) +
                                " rows, column " + x.name() + " has " +
                                std::to_string(x.size()));
  const Ordering& ord = g.ordering();
  std::int64_t K = g.n_groups();

  std::vector<Column> results;
  results.reserve(static_cast<size_t>(K));
  int shape = -1;  // 0: scalar per group, 1: group length
  for (std::int64_t k = 0; k < K; ++k) {
    std::int64_t lo = ord.starts[static_cast<size_t>(k)];
    std::int64_t cnt = g.group_sizes()[static_cast<size_t>(k)];
    std::vector<std::int64_t> rows(ord.perm.begin() + lo, ord.perm.begin() + lo + cnt);
    Column slice = x.take(rows);
    Column res = f(slice);
    int this_shape = res.size() == 1 ? 0 : (res.size() == cnt ? 1 : -1);
    if (this_shape == -1 || (shape != -1 && this_shape != shape))
      throw std::invalid_argument("by_apply: group result shapes are inconsistent");
    shape = this_shape;
    results.push_back(std::move(res));
  }

  if (K == 0) return Column::f64(x.name(), std::vector<double>{});

  if (shape == 0) {
    std::vector<Value> vals;
    vals.reserve(static_cast<size_t>(K));
    for (const auto& r : results) vals.push_back(r.value_at(0));
    // combine in group order; numeric results assemble to float64
    bool all_numeric = true;
    for (const auto& r : results) all_numeric = all_numeric && r.is_numeric();
    std::vector<std::uint8_t> mask(static_cast<size_t>(K), 0);
    if (all_numeric) {
      std::vector<double> v(static_cast<size_t>(K), 0.0);
      for (std::int64_t k = 0; k < K; ++k) {
        if (results[static_cast<size_t>(k)].is_valid(0)) {
          v[static_cast<size_t>(k)] = results[static_cast<size_t>(k)].number_at(0);
          mask[static_cast<size_t>(k)] = 1;
        }
      }
      Column out = Column::f64(x.name(), std::move(v), std::move(mask));
      out.set_label(x.label());
      if (g.groups()) out.set_row_names(g.group_labels());
      return out;
    }
    std::vector<std::string> v(static_cast<size_t>(K));
    for (std::int64_t k = 0; k < K; ++k) {
      if (!value_missing(vals[static_cast<size_t>(k)])) {
        v[static_cast<size_t>(k)] = value_to_string(vals[static_cast<size_t>(k)]);
        mask[static_cast<size_t>(k)] = 1;
      }
    }
    Column out = Column::text(x.name(), std::move(v), std::move(mask));
    if (g.groups()) out.set_row_names(g.group_labels());
    return out;
  }

  // group-length results: re-stitch to original row order
  std::vector<double> v(static_cast<size_t>(g.nrow()), 0.0);
  std::vector<std::uint8_t> mask(static_cast<size_t>(g.nrow()), 0);
  for (std::int64_t k = 0; k < K; ++k) {
    const Column& res = results[static_cast<size_t>(k)];
    if (!res.is_numeric())
      throw std::invalid_argument("by_apply: group-length results must be numeric");
    std::int64_t lo = ord.starts[static_cast<size_t>(k)];
    for (std::int64_t j = 0; j < res.size(); ++j) {
      std::int64_t row = ord.perm[static_cast<size_t>(lo + j)];
      if (res.is_valid(j)) {
        v[static_cast<size_t>(row)] = res.number_at(j);
        mask[static_cast<size_t>(row)] = 1;
      }
    }
  }
  Column out = Column::f64(x.name(), std::move(v), std::move(mask));
  out.set_label(x.label());
  return out;
}

Frame by_apply(const Frame& frame, const Grouping& g,
               const std::function<Column(const Column&)>& f) {
  std::vector<Column> out;
  out.reserve(static_cast<size_t>(frame.ncol()));
  for (const auto& c : frame.columns()) out.push_back(by_apply(c, g, f));
  return Frame(std::move(out));
}

Frame dapply_columns(const Frame& frame, const std::function<Column(const Column&)>& f) {
  std::vector<Column> out;
  std::int64_t len = -1;
  for (const auto& c : frame.columns()) {
    Column res = f(c);
    if (len >= 0 && res.size() != len)
      throw std::invalid_argument("dapply: column results have inconsistent lengths");
    len = res.size();
    res.rename(c.name());
    res.set_label(c.label());
    out.push_back(std::move(res));
  }
  return Frame(std::move(out));
}

Frame dapply_rows(const Frame& frame,
                  const std::function<std::vector<double>(const std::vector<double>&)>& f) {
  for (const auto& c : frame.columns()) {
    if (!c.is_numeric())
      throw std::invalid_argument("dapply over rows requires numeric columns, " + c.name() +
                                  " is " + kind_name(c.kind()));
  }
  std::int64_t n = frame.nrow();
  std::int64_t k = frame.ncol();
  std::vector<std::vector<double>> results(static_cast<size_t>(n));
  std::int64_t m = -1;
  std::vector<double> row(static_cast<size_t>(k));
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = 0; j < k; ++j) row[static_cast<size_t>(j)] = frame.column(j).number_at(i);
    results[static_cast<size_t>(i)] = f(row);
    if (m >= 0 && static_cast<std::int64_t>(results[static_cast<size_t>(i)].size()) != m)
      throw std::invalid_argument("dapply: row results have inconsistent lengths");
    m = static_cast<std::int64_t>(results[static_cast<size_t>(i)].size());
  }
  if (n == 0) m = k;

  std::vector<Column> cols;
  for (std::int64_t j = 0; j < m; ++j) {
    std::vector<double> v(static_cast<size_t>(n), 0.0);
    std::vector<std::uint8_t> mask(static_cast<size_t>(n), 1);
    for (std::int64_t i = 0; i < n; ++i) {
      double val = results[static_cast<size_t>(i)][static_cast<size_t>(j)];
      if (std::isnan(val)) mask[static_cast<size_t>(i)] = 0;
      else v[static_cast<size_t>(i)] = val;
    }
    std::string name = m == k ? frame.column(j).name() : "V" + std::to_string(j + 1);
    cols.push_back(Column::f64(name, std::move(v), std::move(mask)));
  }
  return Frame(std::move(cols));
}

}  // namespace foldframe
