#include "foldframe/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "parallel.hpp"

namespace foldframe {

const char* stat_name(Stat s) {
  switch (s) {
    case Stat::sum: return "sum";
    case Stat::prod: return "prod";
    case Stat::mean: return "mean";
    case Stat::median: return "median";
    case Stat::mode: return "mode";
    case Stat::var: return "var";
    case Stat::sd: return "sd";
    case Stat::min: return "min";
    case Stat::max: return "max";
    case Stat::nth: return "nth";
    case Stat::first: return "first";
    case Stat::last: return "last";
    case Stat::nobs: return "nobs";
    case Stat::ndistinct: return "ndistinct";
  }
  return "?";
}

std::optional<Stat> stat_from_name(const std::string& name) {
  static const std::unordered_map<std::string, Stat> map = {
      {"sum", Stat::sum},     {"prod", Stat::prod},   {"mean", Stat::mean},
      {"median", Stat::median}, {"mode", Stat::mode}, {"var", Stat::var},
      {"sd", Stat::sd},       {"min", Stat::min},     {"max", Stat::max},
      {"nth", Stat::nth},     {"first", Stat::first}, {"last", Stat::last},
      {"nobs", Stat::nobs},   {"ndistinct", Stat::ndistinct},
  };
  auto it = map.find(name);
  if (it == map.end()) return std::nullopt;
  return it->second;
}

const char* sweep_name(SweepOp op) {
  switch (op) {
    case SweepOp::replace_na: return "replace_na";
    case SweepOp::replace_fill: return "replace_fill";
    case SweepOp::replace: return "replace";
    case SweepOp::subtract: return "-";
    case SweepOp::subtract_add_avg: return "-+";
    case SweepOp::divide: return "/";
    case SweepOp::percent: return "%";
    case SweepOp::add: return "+";
    case SweepOp::multiply: return "*";
    case SweepOp::modulus: return "%%";
    case SweepOp::subtract_modulus: return "-%%";
  }
  return "?";
}

std::optional<SweepOp> sweep_from_name(const std::string& name) {
  static const std::unordered_map<std::string, SweepOp> map = {
      {"replace_na", SweepOp::replace_na},     {"na", SweepOp::replace_na},
      {"replace_fill", SweepOp::replace_fill}, {"fill", SweepOp::replace_fill},
      {"replace", SweepOp::replace},           {"-", SweepOp::subtract},
      {"-+", SweepOp::subtract_add_avg},       {"/", SweepOp::divide},
      {"%", SweepOp::percent},                 {"+", SweepOp::add},
      {"*", SweepOp::multiply},                {"%%", SweepOp::modulus},
      {"-%%", SweepOp::subtract_modulus},
  };
  auto it = map.find(name);
  if (it == map.end()) return std::nullopt;
  return it->second;
}

namespace {

void check_alignment(const Column& x, const Grouping* g, const Column* w) {
  if (g && g->nrow() != x.size())
    throw std::invalid_argument("grouping covers " + std::to_string(g->nrow()) +
                                " rows, column " + x.name() + " has " +
                                std::to_string(x.size()));
  if (w && w->size() != x.size())
    throw std::invalid_argument("weight column " + w->name() + " has " +
                                std::to_string(w->size()) + " rows, expected " +
                                std::to_string(x.size()));
}

void check_weights(const Column* w) {
  if (!w) return;
  if (!w->is_numeric())
    throw std::invalid_argument("weight column " + w->name() + " must be numeric");
  for (std::int64_t i = 0; i < w->size(); ++i) {
    if (w->is_valid(i) && w->number_at(i) < 0.0)
      throw std::invalid_argument("negative weight in column " + w->name());
  }
}

// Iterates groups, handing each a list of row indices in ascending row order.
// Per-group work is independent, so chunking groups across threads cannot
// change results.
template <typename F>
void for_each_group(const Grouping* g, std::int64_t nrow, int nthreads, F&& fn) {
  if (!g) {
    std::vector<std::int64_t> rows(static_cast<size_t>(nrow));
    for (std::int64_t i = 0; i < nrow; ++i) rows[static_cast<size_t>(i)] = i;
    fn(0, rows.data(), nrow);
    return;
  }
  const Ordering& ord = g->ordering();
  const auto& sizes = g->group_sizes();
  detail::parallel_for(g->n_groups(), nthreads, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t k = begin; k < end; ++k) {
      fn(k, ord.perm.data() + ord.starts[static_cast<size_t>(k)],
         sizes[static_cast<size_t>(k)]);
    }
  });
}

struct NumericView {
  std::vector<double> x;
  const std::vector<std::uint8_t>* xv;
  std::vector<double> w;
  const std::vector<std::uint8_t>* wv = nullptr;
  bool weighted = false;
};

NumericView numeric_view(const Column& x, const Column* w) {
  if (!x.is_numeric())
    throw std::invalid_argument("statistic requires a numeric column, " + x.name() + " is " +
                                kind_name(x.kind()));
  NumericView v;
  v.x = x.to_f64();
  v.xv = &x.validity();
  if (w) {
    v.w = w->to_f64();
    v.wv = &w->validity();
    v.weighted = true;
  }
  return v;
}

Column finish_numeric(const Column& x, std::vector<double> values,
                      std::vector<std::uint8_t> mask) {
  Column out = Column::f64(x.name(), std::move(values), std::move(mask));
  out.set_label(x.label());
  return out;
}

void attach_group_names(Column& out, const Grouping* g, const ResolvedStatOptions& opts) {
  if (g && opts.use_group_names && g->groups()) out.set_row_names(g->group_labels());
}

enum class AccKind { sum, prod, mean, var, sd };

Column reduce_accumulate(AccKind kind, const Column& x, const Grouping* g, const Column* w,
                         const ResolvedStatOptions& opts) {
  std::int64_t K = g ? g->n_groups() : 1;
  // Unweighted integer/boolean sums and products stay integral.
  bool int_result = (kind == AccKind::sum || kind == AccKind::prod) && !w &&
                    (x.kind() == ValueKind::int64 || x.kind() == ValueKind::boolean);

  NumericView v = numeric_view(x, w);
  std::vector<double> out(static_cast<size_t>(K), 0.0);
  std::vector<std::int64_t> iout;
  if (int_result) iout.assign(static_cast<size_t>(K), 0);
  std::vector<std::uint8_t> mask(static_cast<size_t>(K), 0);

  for_each_group(g, x.size(), opts.nthreads, [&](std::int64_t k, const std::int64_t* rows,
                                                 std::int64_t cnt) {
    double sum = 0.0, wsum = 0.0, prod = 1.0;
    std::int64_t isum = 0, iprod = 1;
    double mean = 0.0, m2 = 0.0, wtot = 0.0;
    std::int64_t nvalid = 0;
    bool broken = false;
    for (std::int64_t j = 0; j < cnt; ++j) {
      std::int64_t r = rows[j];
      size_t ri = static_cast<size_t>(r);
      bool ok = (*v.xv)[ri] && (!v.weighted || (*v.wv)[ri]);
      if (!ok) {
        if (!opts.na_rm) {
          broken = true;
          break;
        }
        continue;
      }
      double xi = v.x[ri];
      double wi = v.weighted ? v.w[ri] : 1.0;
      ++nvalid;
      switch (kind) {
        case AccKind::sum:
          if (int_result) isum += static_cast<std::int64_t>(xi);
          else sum += v.weighted ? wi * xi : xi;
          break;
        case AccKind::prod:
          if (int_result) iprod *= static_cast<std::int64_t>(xi);
          else prod *= v.weighted ? std::pow(xi, wi) : xi;
          break;
        case AccKind::mean:
          sum += wi * xi;
          wsum += wi;
          break;
        case AccKind::var:
        case AccKind::sd: {
          if (wi <= 0.0) break;  // zero-weight rows contribute nothing
          wtot += wi;
          double d = xi - mean;
          mean += (wi / wtot) * d;
          m2 += wi * d * (xi - mean);
          break;
        }
      }
    }
    size_t ki = static_cast<size_t>(k);
    if (broken || nvalid == 0) return;
    switch (kind) {
      case AccKind::sum:
        if (int_result) iout[ki] = isum;
        else out[ki] = sum;
        mask[ki] = 1;
        break;
      case AccKind::prod:
        if (int_result) iout[ki] = iprod;
        else out[ki] = prod;
        mask[ki] = 1;
        break;
      case AccKind::mean:
        out[ki] = sum / wsum;
        mask[ki] = 1;
        break;
      case AccKind::var:
      case AccKind::sd:
        if (wtot > 1.0) {
          double var = m2 / (wtot - 1.0);
          out[ki] = kind == AccKind::sd ? std::sqrt(var) : var;
          mask[ki] = 1;
        }
        break;
    }
  });

  Column result;
  if (int_result) {
    result = Column::i64(x.name(), std::move(iout), std::move(mask));
    result.set_label(x.label());
  } else {
    result = finish_numeric(x, std::move(out), std::move(mask));
  }
  return result;
}

enum class SelKind { min, max, first, last };

Column reduce_select(SelKind kind, const Column& x, const Grouping* g,
                     const ResolvedStatOptions& opts) {
  if ((kind == SelKind::min || kind == SelKind::max) && !x.is_numeric())
    throw std::invalid_argument(std::string(kind == SelKind::min ? "min" : "max") +
                                " requires a numeric column, " + x.name() + " is " +
                                kind_name(x.kind()));
  std::int64_t K = g ? g->n_groups() : 1;
  std::vector<std::int64_t> pick(static_cast<size_t>(K), -1);

  for_each_group(g, x.size(), opts.nthreads, [&](std::int64_t k, const std::int64_t* rows,
                                                 std::int64_t cnt) {
    size_t ki = static_cast<size_t>(k);
    if (!opts.na_rm && (kind == SelKind::first || kind == SelKind::last)) {
      // literal first/last row, possibly missing
      pick[ki] = kind == SelKind::first ? rows[0] : rows[cnt - 1];
      return;
    }
    std::int64_t best = -1;
    double best_val = 0.0;
    for (std::int64_t j = 0; j < cnt; ++j) {
      std::int64_t r = rows[j];
      if (!x.is_valid(r)) {
        if (!opts.na_rm) {
          best = -1;
          break;
        }
        continue;
      }
      switch (kind) {
        case SelKind::first:
          if (best < 0) best = r;
          break;
        case SelKind::last:
          best = r;
          break;
        case SelKind::min: {
          double val = x.number_at(r);
          if (best < 0 || val < best_val) {
            best = r;
            best_val = val;
          }
          break;
        }
        case SelKind::max: {
          double val = x.number_at(r);
          if (best < 0 || val > best_val) {
            best = r;
            best_val = val;
          }
          break;
        }
      }
      if (best >= 0 && kind == SelKind::first && opts.na_rm) break;
    }
    pick[ki] = best;
  });

  return x.take_opt(pick);
}

Column reduce_counts(Stat stat, const Column& x, const Grouping* g,
                     const ResolvedStatOptions& opts) {
  std::int64_t K = g ? g->n_groups() : 1;
  std::vector<std::int64_t> out(static_cast<size_t>(K), 0);

  if (stat == Stat::nobs) {
    for_each_group(g, x.size(), opts.nthreads,
                   [&](std::int64_t k, const std::int64_t* rows, std::int64_t cnt) {
                     if (!opts.na_rm) {
                       out[static_cast<size_t>(k)] = cnt;
                       return;
                     }
                     std::int64_t n = 0;
                     for (std::int64_t j = 0; j < cnt; ++j) n += x.is_valid(rows[j]) ? 1 : 0;
                     out[static_cast<size_t>(k)] = n;
                   });
  } else {
    std::vector<std::int32_t> codes = detail::dense_codes(x, false);
    for_each_group(g, x.size(), opts.nthreads,
                   [&](std::int64_t k, const std::int64_t* rows, std::int64_t cnt) {
                     std::unordered_set<std::int32_t> seen;
                     for (std::int64_t j = 0; j < cnt; ++j) {
                       std::int64_t r = rows[j];
                       if (opts.na_rm && !x.is_valid(r)) continue;
                       seen.insert(codes[static_cast<size_t>(r)]);
                     }
                     out[static_cast<size_t>(k)] = static_cast<std::int64_t>(seen.size());
                   });
  }
  Column result = Column::i64(x.name(), std::move(out));
  result.set_label(x.label());
  return result;
}

}  // namespace

Column mode_stat(const Column& x, const Grouping* g, const Column* w, const StatOptions& opts,
                 std::optional<SweepOp> tra) {
  ResolvedStatOptions r = resolve(opts);
  check_alignment(x, g, w);
  check_weights(w);
  std::int64_t K = g ? g->n_groups() : 1;
  std::vector<std::int32_t> codes = detail::dense_codes(x, false);
  std::vector<std::int64_t> pick(static_cast<size_t>(K), -1);
  std::vector<double> wd;
  if (w) wd = w->to_f64();

  for_each_group(g, x.size(), r.nthreads, [&](std::int64_t k, const std::int64_t* rows,
                                              std::int64_t cnt) {
    // weight sum and first-occurrence row per candidate value
    std::unordered_map<std::int32_t, std::pair<double, std::int64_t>> tally;
    for (std::int64_t j = 0; j < cnt; ++j) {
      std::int64_t row = rows[j];
      size_t ri = static_cast<size_t>(row);
      if (r.na_rm && !x.is_valid(row)) continue;
      double wi = 1.0;
      if (w) {
        if (!w->is_valid(row)) {
          if (r.na_rm) continue;
          wi = 0.0;
        } else {
          wi = wd[ri];
        }
      }
      auto [it, fresh] = tally.try_emplace(codes[ri], 0.0, row);
      it->second.first += wi;
      (void)fresh;
    }
    std::int64_t best_row = -1;
    double best_weight = -1.0;
    std::int64_t best_first = -1;
    for (const auto& [code, entry] : tally) {
      auto [weight, first_row] = entry;
      if (weight > best_weight || (weight == best_weight && first_row < best_first)) {
        best_weight = weight;
        best_first = first_row;
        best_row = first_row;
      }
    }
    pick[static_cast<size_t>(k)] = best_row;
  });

  Column result = x.take_opt(pick);
  attach_group_names(result, g, r);
  if (tra) return sweep(x, result, *tra, g);
  return result;
}

Column reduce(Stat stat, const Column& x, const Grouping* g, const Column* w,
              const StatOptions& opts, std::optional<SweepOp> tra) {
  if (stat == Stat::nth)
    throw std::invalid_argument("nth requires a probability; use quantile()");
  if (stat == Stat::median) return quantile(x, 0.5, w, QuantileTies::q7, g, nullptr, opts, tra);
  if (stat == Stat::mode) return mode_stat(x, g, w, opts, tra);

  ResolvedStatOptions r = resolve(opts);
  check_alignment(x, g, w);

  Column result;
  switch (stat) {
    case Stat::sum:
    case Stat::prod:
    case Stat::mean:
    case Stat::var:
    case Stat::sd: {
      check_weights(w);
      AccKind kind = stat == Stat::sum    ? AccKind::sum
                     : stat == Stat::prod ? AccKind::prod
                     : stat == Stat::mean ? AccKind::mean
                     : stat == Stat::var  ? AccKind::var
                                          : AccKind::sd;
      result = reduce_accumulate(kind, x, g, w, r);
      break;
    }
    case Stat::min:
    case Stat::max:
    case Stat::first:
    case Stat::last: {
      // weights are irrelevant for extrema and positional selection
      SelKind kind = stat == Stat::min   ? SelKind::min
                     : stat == Stat::max ? SelKind::max
                     : stat == Stat::first ? SelKind::first
                                           : SelKind::last;
      result = reduce_select(kind, x, g, r);
      break;
    }
    case Stat::nobs:
    case Stat::ndistinct:
      if (w)
        throw std::invalid_argument(std::string(stat_name(stat)) +
                                    " statistic does not support weights");
      result = reduce_counts(stat, x, g, r);
      break;
    default:
      throw std::logic_error("reduce: unhandled statistic");
  }
  attach_group_names(result, g, r);
  if (tra) return sweep(x, result, *tra, g);
  return result;
}

}  // namespace foldframe
