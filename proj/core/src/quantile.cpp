#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "foldframe/stats.hpp"
#include "parallel.hpp"

namespace foldframe {

namespace {

// Interpolated value at expanded position h over values sorted ascending with
// cumulative weights cum (cum.back() == W). Positions are 1-based; h must
// already be clamped to [1, W].
double interpolate_weighted(const std::vector<double>& values, const std::vector<double>& cum,
                            double h) {
  double j = std::floor(h);
  double gamma = h - j;
  auto pick = [&](double pos) -> double {
    auto it = std::lower_bound(cum.begin(), cum.end(), pos);
    size_t k = it == cum.end() ? cum.size() - 1 : static_cast<size_t>(it - cum.begin());
    return values[k];
  };
  double lo = pick(j);
  if (gamma == 0.0) return lo;
  double hi = pick(j + 1.0);
  return (1.0 - gamma) * lo + gamma * hi;
}

double plotting_position(QuantileTies ties, double p, double w_total) {
  switch (ties) {
    case QuantileTies::q8:
      return (w_total + 1.0 / 3.0) * p + 1.0 / 3.0;
    case QuantileTies::q7:
    case QuantileTies::lower:
    case QuantileTies::upper:
    default:
      return 1.0 + (w_total - 1.0) * p;
  }
}

double quantile_of_sorted(const std::vector<double>& values, const std::vector<double>& cum,
                          QuantileTies ties, double p) {
  double w_total = cum.back();
  double h = plotting_position(ties, p, w_total);
  h = std::min(std::max(h, 1.0), std::max(w_total, 1.0));
  switch (ties) {
    case QuantileTies::lower:
      return interpolate_weighted(values, cum, std::floor(h));
    case QuantileTies::upper:
      return interpolate_weighted(values, cum, std::ceil(h));
    default:
      return interpolate_weighted(values, cum, h);
  }
}

void check_permutation(const std::vector<std::int64_t>& ord, std::int64_t n) {
  if (static_cast<std::int64_t>(ord.size()) != n)
    throw std::invalid_argument("ordering length " + std::to_string(ord.size()) +
                                " does not match " + std::to_string(n) + " rows");
  std::vector<std::uint8_t> seen(static_cast<size_t>(n), 0);
  for (auto i : ord) {
    if (i < 0 || i >= n || seen[static_cast<size_t>(i)])
      throw std::invalid_argument("ordering is not a permutation of the row indices");
    seen[static_cast<size_t>(i)] = 1;
  }
}

}  // namespace

Column quantile(const Column& x, double p, const Column* w, QuantileTies ties,
                const Grouping* g, const std::vector<std::int64_t>* ord,
                const StatOptions& opts, std::optional<SweepOp> tra) {
  if (p < 0.0 || p > 1.0)
    throw std::invalid_argument("quantile probability must be in [0, 1], got " +
                                std::to_string(p));
  if (!x.is_numeric())
    throw std::invalid_argument("quantile requires a numeric column, " + x.name() + " is " +
                                kind_name(x.kind()));
  ResolvedStatOptions r = resolve(opts);
  if (g && g->nrow() != x.size())
    throw std::invalid_argument("grouping covers " + std::to_string(g->nrow()) +
                                " rows, column " + x.name() + " has " +
                                std::to_string(x.size()));
  if (w) {
    if (w->size() != x.size())
      throw std::invalid_argument("weight column " + w->name() + " length mismatch");
    if (!w->is_numeric())
      throw std::invalid_argument("weight column " + w->name() + " must be numeric");
    for (std::int64_t i = 0; i < w->size(); ++i) {
      if (w->is_valid(i) && w->number_at(i) < 0.0)
        throw std::invalid_argument("negative weight in column " + w->name());
    }
  }
  if (ord) check_permutation(*ord, x.size());

  std::int64_t K = g ? g->n_groups() : 1;
  std::vector<double> xd = x.to_f64();
  std::vector<double> wd;
  if (w) wd = w->to_f64();

  std::vector<double> out(static_cast<size_t>(K), 0.0);
  std::vector<std::uint8_t> mask(static_cast<size_t>(K), 0);

  // With an ordering vector the rows of group k occupy one contiguous,
  // value-ascending slice; otherwise gather and sort per group.
  std::vector<std::int64_t> slice_start;
  if (ord && g) {
    slice_start.resize(static_cast<size_t>(K) + 1, 0);
    std::int64_t acc = 0;
    for (std::int64_t k = 0; k < K; ++k) {
      slice_start[static_cast<size_t>(k)] = acc;
      acc += g->group_sizes()[static_cast<size_t>(k)];
    }
    slice_start[static_cast<size_t>(K)] = acc;
  }

  auto run_group = [&](std::int64_t k, const std::int64_t* rows, std::int64_t cnt,
                       bool presorted) {
    std::vector<double> values;
    std::vector<double> weights;
    values.reserve(static_cast<size_t>(cnt));
    bool broken = false;
    for (std::int64_t j = 0; j < cnt; ++j) {
      std::int64_t row = rows[j];
      size_t ri = static_cast<size_t>(row);
      bool ok = x.is_valid(row) && (!w || w->is_valid(row));
      if (!ok) {
        if (!r.na_rm) {
          broken = true;
          break;
        }
        continue;
      }
      values.push_back(xd[ri]);
      if (w) weights.push_back(wd[ri]);
    }
    if (broken || values.empty()) return;
    if (!presorted) {
      if (w) {
        std::vector<size_t> idx(values.size());
        std::iota(idx.begin(), idx.end(), size_t{0});
        std::stable_sort(idx.begin(), idx.end(),
                         [&](size_t a, size_t b) { return values[a] < values[b]; });
        std::vector<double> sv(values.size()), sw(values.size());
        for (size_t i = 0; i < idx.size(); ++i) {
          sv[i] = values[idx[i]];
          sw[i] = weights[idx[i]];
        }
        values = std::move(sv);
        weights = std::move(sw);
      } else {
        std::sort(values.begin(), values.end());
      }
    }
    std::vector<double> cum(values.size());
    double acc = 0.0;
    for (size_t i = 0; i < values.size(); ++i) {
      acc += w ? weights[i] : 1.0;
      cum[i] = acc;
    }
    if (acc <= 0.0) return;
    out[static_cast<size_t>(k)] = quantile_of_sorted(values, cum, ties, p);
    mask[static_cast<size_t>(k)] = 1;
  };

  if (ord && g) {
    const auto& perm = *ord;
    const auto& gid = g->group_id();
    // validate up front that the ordering groups rows contiguously in group
    // order (worker threads must not throw)
    for (std::int64_t k = 0; k < K; ++k) {
      std::int64_t lo = slice_start[static_cast<size_t>(k)];
      std::int64_t hi = slice_start[static_cast<size_t>(k) + 1];
      for (std::int64_t j = lo; j < hi; ++j) {
        if (gid[static_cast<size_t>(perm[static_cast<size_t>(j)])] != k)
          throw std::invalid_argument("ordering does not sort rows by group");
      }
    }
    detail::parallel_for(K, r.nthreads, [&](std::int64_t begin, std::int64_t end) {
      for (std::int64_t k = begin; k < end; ++k) {
        std::int64_t lo = slice_start[static_cast<size_t>(k)];
        std::int64_t hi = slice_start[static_cast<size_t>(k) + 1];
        run_group(k, perm.data() + lo, hi - lo, true);
      }
    });
  } else if (ord) {
    run_group(0, ord->data(), x.size(), true);
  } else if (g) {
    const Ordering& go = g->ordering();
    detail::parallel_for(K, r.nthreads, [&](std::int64_t begin, std::int64_t end) {
      for (std::int64_t k = begin; k < end; ++k) {
        run_group(k, go.perm.data() + go.starts[static_cast<size_t>(k)],
                  g->group_sizes()[static_cast<size_t>(k)], false);
      }
    });
  } else {
    std::vector<std::int64_t> rows(static_cast<size_t>(x.size()));
    std::iota(rows.begin(), rows.end(), std::int64_t{0});
    run_group(0, rows.data(), x.size(), false);
  }

  Column result = Column::f64(x.name(), std::move(out), std::move(mask));
  result.set_label(x.label());
  if (g && r.use_group_names && g->groups()) result.set_row_names(g->group_labels());
  if (tra) return sweep(x, result, *tra, g);
  return result;
}

Column median(const Column& x, const Column* w, const Grouping* g,
              const std::vector<std::int64_t>* ord, const StatOptions& opts,
              std::optional<SweepOp> tra) {
  return quantile(x, 0.5, w, QuantileTies::q7, g, ord, opts, tra);
}

}  // namespace foldframe
