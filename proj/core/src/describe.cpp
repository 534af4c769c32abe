#include "foldframe/describe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace foldframe {

namespace {

struct Moments {
  double n = 0.0;       // valid pair count
  double wsum = 0.0;    // total weight
  double mean = 0.0;
  double sd = std::numeric_limits<double>::quiet_NaN();
  double min = std::numeric_limits<double>::quiet_NaN();
  double max = std::numeric_limits<double>::quiet_NaN();
  bool any = false;
};

// Weighted moments over (value, weight) pairs accumulated in call order.
class MomentAcc {
 public:
  void add(double x, double w) {
    if (w < 0.0) throw std::invalid_argument("negative weight");
    ++n_;
    if (w <= 0.0) return;
    wtot_ += w;
    double d = x - mean_;
    mean_ += (w / wtot_) * d;
    m2_ += w * d * (x - mean_);
    if (!any_ || x < min_) min_ = x;
    if (!any_ || x > max_) max_ = x;
    any_ = true;
  }

  Moments finish() const {
    Moments m;
    m.n = n_;
    m.wsum = wtot_;
    m.any = any_;
    if (!any_) return m;
    m.mean = mean_;
    m.min = min_;
    m.max = max_;
    if (wtot_ > 1.0) m.sd = std::sqrt(m2_ / (wtot_ - 1.0));
    return m;
  }

 private:
  double n_ = 0.0, wtot_ = 0.0, mean_ = 0.0, m2_ = 0.0;
  double min_ = 0.0, max_ = 0.0;
  bool any_ = false;
};

struct ScopeRow {
  std::string scope;
  double n = 0.0;
  double wsum = 0.0;
  Moments m;
};

void append_summary_rows(const std::string& var, const std::optional<std::string>& group,
                         const std::vector<ScopeRow>& rows, bool weighted,
                         std::vector<std::optional<std::string>>& variable,
                         std::vector<std::optional<std::string>>& group_col,
                         std::vector<std::string>& scope, std::vector<double>& n,
                         std::vector<std::optional<double>>& wsum,
                         std::vector<std::optional<double>>& mean,
                         std::vector<std::optional<double>>& sd,
                         std::vector<std::optional<double>>& mn,
                         std::vector<std::optional<double>>& mx) {
  for (const auto& r : rows) {
    variable.push_back(var);
    group_col.push_back(group);
    scope.push_back(r.scope);
    n.push_back(r.n);
    if (weighted) wsum.push_back(r.wsum);
    auto opt = [](double v) -> std::optional<double> {
      if (std::isnan(v)) return std::nullopt;
      return v;
    };
    if (r.m.any) {
      mean.push_back(opt(r.m.mean));
      sd.push_back(opt(r.m.sd));
      mn.push_back(opt(r.m.min));
      mx.push_back(opt(r.m.max));
    } else {
      mean.push_back(std::nullopt);
      sd.push_back(std::nullopt);
      mn.push_back(std::nullopt);
      mx.push_back(std::nullopt);
    }
  }
}

std::vector<ScopeRow> summarize_subset(const Column& x, const std::vector<std::int64_t>& rows,
                                       const Grouping* pid, const Column* w) {
  std::vector<double> xd = x.to_f64();
  std::vector<double> wd;
  if (w) wd = w->to_f64();
  auto weight_of = [&](std::int64_t i) -> double {
    if (!w) return 1.0;
    return w->is_valid(i) ? wd[static_cast<size_t>(i)] : std::numeric_limits<double>::quiet_NaN();
  };

  MomentAcc overall;
  double n_valid = 0.0, wsum = 0.0;
  // per panel-group accumulation for the between/within scopes
  struct GroupAcc {
    double wsum = 0.0, xsum = 0.0;
    double n = 0.0;
  };
  std::unordered_map<std::int32_t, GroupAcc> groups;

  for (auto i : rows) {
    if (!x.is_valid(i)) continue;
    double wi = weight_of(i);
    if (std::isnan(wi)) continue;
    overall.add(xd[static_cast<size_t>(i)], wi);
    n_valid += 1.0;
    wsum += wi;
    if (pid) {
      auto& ga = groups[pid->group_id()[static_cast<size_t>(i)]];
      ga.wsum += wi;
      ga.xsum += wi * xd[static_cast<size_t>(i)];
      ga.n += 1.0;
    }
  }

  std::vector<ScopeRow> out;
  ScopeRow ov{"Overall", n_valid, wsum, overall.finish()};
  out.push_back(ov);
  if (!pid) return out;

  // Between: statistics over the vector of group means, each weighted by its
  // group weight sum.
  std::vector<std::int32_t> gids;
  gids.reserve(groups.size());
  for (const auto& [gid, acc] : groups) gids.push_back(gid);
  std::sort(gids.begin(), gids.end());  // deterministic accumulation order
  MomentAcc between;
  double n_groups = 0.0;
  for (auto gid : gids) {
    const auto& acc = groups.at(gid);
    if (acc.wsum <= 0.0) continue;
    between.add(acc.xsum / acc.wsum, acc.wsum);
    n_groups += 1.0;
  }
  out.push_back(ScopeRow{"Between", n_groups, wsum, between.finish()});

  // Within: x - group mean + overall mean, preserving scale.
  double grand = ov.m.any ? ov.m.mean : 0.0;
  MomentAcc within;
  for (auto i : rows) {
    if (!x.is_valid(i)) continue;
    double wi = weight_of(i);
    if (std::isnan(wi)) continue;
    const auto& acc = groups.at(pid->group_id()[static_cast<size_t>(i)]);
    if (acc.wsum <= 0.0) continue;
    within.add(xd[static_cast<size_t>(i)] - acc.xsum / acc.wsum + grand, wi);
  }
  double avg_size = n_groups > 0.0 ? n_valid / n_groups : 0.0;
  double avg_wsum = n_groups > 0.0 ? wsum / n_groups : 0.0;
  out.push_back(ScopeRow{"Within", avg_size, avg_wsum, within.finish()});
  return out;
}

std::vector<std::vector<std::int64_t>> by_group_rows(const Grouping* by, std::int64_t nrow) {
  std::vector<std::vector<std::int64_t>> rows;
  if (!by) {
    rows.emplace_back();
    rows.back().reserve(static_cast<size_t>(nrow));
    for (std::int64_t i = 0; i < nrow; ++i) rows.back().push_back(i);
    return rows;
  }
  rows.resize(static_cast<size_t>(by->n_groups()));
  const Ordering& ord = by->ordering();
  for (std::int64_t k = 0; k < by->n_groups(); ++k) {
    std::int64_t lo = ord.starts[static_cast<size_t>(k)];
    std::int64_t cnt = by->group_sizes()[static_cast<size_t>(k)];
    rows[static_cast<size_t>(k)].assign(ord.perm.begin() + lo, ord.perm.begin() + lo + cnt);
  }
  return rows;
}

}  // namespace

Frame panel_summary(const Column& x, const Grouping* pid, const Grouping* by, const Column* w) {
  if (!x.is_numeric())
    throw std::invalid_argument("panel_summary requires numeric data, " + x.name() + " is " +
                                kind_name(x.kind()));
  if (pid && pid->nrow() != x.size())
    throw std::invalid_argument("panel grouping does not match column length");
  if (by && by->nrow() != x.size())
    throw std::invalid_argument("by grouping does not match column length");

  std::vector<std::optional<std::string>> variable, group_col;
  std::vector<std::string> scope;
  std::vector<double> n;
  std::vector<std::optional<double>> wsum, mean, sd, mn, mx;

  auto groups_rows = by_group_rows(by, x.size());
  std::vector<std::string> by_labels;
  if (by) by_labels = by->group_labels();
  for (size_t k = 0; k < groups_rows.size(); ++k) {
    std::optional<std::string> label;
    if (by) label = by_labels[k];
    auto rows = summarize_subset(x, groups_rows[k], pid, w);
    append_summary_rows(x.name(), label, rows, w != nullptr, variable, group_col, scope, n,
                        wsum, mean, sd, mn, mx);
  }

  Frame out;
  out.add(Column::text("Variable", variable));
  if (by) out.add(Column::text("Group", group_col));
  out.add(Column::text("Scope", std::move(scope)));
  out.add(Column::f64("N", std::move(n)));
  if (w) out.add(Column::f64("WeightSum", wsum));
  out.add(Column::f64("Mean", mean));
  out.add(Column::f64("SD", sd));
  out.add(Column::f64("Min", mn));
  out.add(Column::f64("Max", mx));
  return out;
}

Frame panel_summary(const Frame& frame, const Grouping* pid, const Grouping* by,
                    const Column* w) {
  Frame out;
  bool first = true;
  for (const auto& c : frame.columns()) {
    if (!c.is_numeric()) continue;
    Frame part = panel_summary(c, pid, by, w);
    if (first) {
      out = std::move(part);
      first = false;
    } else {
      Frame merged;
      for (std::int64_t ci = 0; ci < out.ncol(); ++ci) {
        const Column& a = out.column(ci);
        const Column& b = part.column(ci);
        std::vector<Value> vals;
        vals.reserve(static_cast<size_t>(a.size() + b.size()));
        for (std::int64_t i = 0; i < a.size(); ++i) vals.push_back(a.value_at(i));
        for (std::int64_t i = 0; i < b.size(); ++i) vals.push_back(b.value_at(i));
        std::vector<std::uint8_t> mask(vals.size(), 0);
        if (a.kind() == ValueKind::text) {
          std::vector<std::string> v(vals.size());
          for (size_t i = 0; i < vals.size(); ++i) {
            if (!value_missing(vals[i])) {
              v[i] = value_to_string(vals[i]);
              mask[i] = 1;
            }
          }
          Column col = Column::text(a.name(), std::move(v), std::move(mask));
          merged.add(std::move(col));
        } else {
          std::vector<double> v(vals.size(), 0.0);
          for (size_t i = 0; i < vals.size(); ++i) {
            if (!value_missing(vals[i])) {
              v[i] = std::get<double>(vals[i]);
              mask[i] = 1;
            }
          }
          Column col = Column::f64(a.name(), std::move(v), std::move(mask));
          merged.add(std::move(col));
        }
      }
      out = std::move(merged);
    }
  }
  if (first) throw std::invalid_argument("panel_summary: no numeric columns");
  return out;
}

namespace {

const std::vector<double>& descr_probs() {
  static const std::vector<double> ps = {0.01, 0.05, 0.10, 0.25, 0.50, 0.75, 0.90, 0.95, 0.99};
  return ps;
}

Column zero_filled_weights(const Column& w) {
  // missing weights become 0 so quantile kernels see complete weights
  std::vector<double> v = w.to_f64();
  for (auto& x : v) {
    if (std::isnan(x)) x = 0.0;
  }
  return Column::f64(w.name(), std::move(v));
}

}  // namespace

Description describe(const Frame& frame, const Grouping* by, const Column* w) {
  if (w) {
    for (std::int64_t i = 0; i < w->size(); ++i) {
      if (w->is_valid(i) && w->number_at(i) < 0.0)
        throw std::invalid_argument("negative weight in column " + w->name());
    }
  }
  std::optional<Column> wfixed;
  if (w) wfixed = zero_filled_weights(*w);
  const Column* wp = wfixed ? &*wfixed : nullptr;

  Description out;
  out.n_rows = frame.nrow();
  if (wp) {
    for (std::int64_t i = 0; i < wp->size(); ++i) out.weight_sum += wp->number_at(i);
  }

  auto groups_rows = by_group_rows(by, frame.nrow());
  std::vector<std::string> by_labels;
  if (by) by_labels = by->group_labels();

  double total_n = static_cast<double>(frame.nrow());
  double total_w = out.weight_sum;

  for (const auto& col : frame.columns()) {
    VariableDescription vd;
    vd.name = col.name();
    vd.klass = class_name(col.kind());
    vd.label = col.label();
    vd.numeric = col.is_numeric() && col.kind() != ValueKind::boolean;

    if (vd.numeric) {
      std::vector<std::optional<std::string>> group_col;
      std::vector<std::int64_t> n, ndist;
      std::vector<std::optional<double>> wsum, perc, mean, sd, mn, mx, skew, kurt;
      std::vector<std::vector<std::optional<double>>> qs(descr_probs().size());

      std::vector<double> xd = col.to_f64();
      for (size_t k = 0; k < groups_rows.size(); ++k) {
        const auto& rows = groups_rows[k];
        if (by) group_col.push_back(by_labels[k]);
        else group_col.push_back(std::nullopt);

        // moments pass
        MomentAcc acc;
        double nv = 0.0, ws = 0.0;
        std::vector<double> values, weights;
        for (auto i : rows) {
          if (!col.is_valid(i)) continue;
          double wi = wp ? wp->number_at(i) : 1.0;
          acc.add(xd[static_cast<size_t>(i)], wi);
          nv += 1.0;
          ws += wi;
          values.push_back(xd[static_cast<size_t>(i)]);
          weights.push_back(wi);
        }
        Moments m = acc.finish();
        n.push_back(static_cast<std::int64_t>(nv));
        {
          std::unordered_map<double, int> uniq;
          for (double v : values) uniq.emplace(v == 0.0 ? 0.0 : v, 0);
          ndist.push_back(static_cast<std::int64_t>(uniq.size()));
        }
        if (wp) wsum.push_back(ws);
        if (by) {
          double denom = wp ? total_w : total_n;
          perc.push_back(denom > 0.0 ? 100.0 * (wp ? ws : nv) / denom : 0.0);
        }
        auto opt = [](double v) -> std::optional<double> {
          if (std::isnan(v)) return std::nullopt;
          return v;
        };
        if (m.any) {
          mean.push_back(opt(m.mean));
          sd.push_back(opt(m.sd));
          mn.push_back(opt(m.min));
          mx.push_back(opt(m.max));
          // central moments for Skew/Kurt
          double m2 = 0.0, m3 = 0.0, m4 = 0.0, wt = 0.0;
          for (size_t i = 0; i < values.size(); ++i) {
            double wi = weights[i];
            if (wi <= 0.0) continue;
            double d = values[i] - m.mean;
            wt += wi;
            m2 += wi * d * d;
            m3 += wi * d * d * d;
            m4 += wi * d * d * d * d;
          }
          if (wt > 0.0 && m2 > 0.0) {
            m2 /= wt;
            m3 /= wt;
            m4 /= wt;
            skew.push_back(m3 / std::pow(m2, 1.5));
            kurt.push_back(m4 / (m2 * m2));
          } else {
            skew.push_back(std::nullopt);
            kurt.push_back(std::nullopt);
          }
        } else {
          mean.push_back(std::nullopt);
          sd.push_back(std::nullopt);
          mn.push_back(std::nullopt);
          mx.push_back(std::nullopt);
          skew.push_back(std::nullopt);
          kurt.push_back(std::nullopt);
        }

        // quantiles on the subset
        if (values.empty()) {
          for (auto& q : qs) q.push_back(std::nullopt);
        } else {
          Column sub = Column::f64(col.name(), values);
          std::optional<Column> subw;
          if (wp) subw = Column::f64("w", weights);
          for (size_t pi = 0; pi < descr_probs().size(); ++pi) {
            Column q = quantile(sub, descr_probs()[pi], subw ? &*subw : nullptr,
                                QuantileTies::q7, nullptr, nullptr, StatOptions{});
            qs[pi].push_back(q.is_valid(0) ? std::optional<double>(q.f64_data()[0])
                                           : std::nullopt);
          }
        }
      }

      Frame stats;
      if (by) stats.add(Column::text("Group", group_col));
      stats.add(Column::i64("N", std::move(n)));
      stats.add(Column::i64("Ndist", std::move(ndist)));
      if (wp) stats.add(Column::f64("WeightSum", wsum));
      if (by) stats.add(Column::f64("Perc", perc));
      stats.add(Column::f64("Mean", mean));
      stats.add(Column::f64("SD", sd));
      stats.add(Column::f64("Min", mn));
      stats.add(Column::f64("Max", mx));
      stats.add(Column::f64("Skew", skew));
      stats.add(Column::f64("Kurt", kurt));
      static const char* qnames[] = {"Q1", "Q5", "Q10", "Q25", "Q50", "Q75", "Q90", "Q95", "Q99"};
      for (size_t pi = 0; pi < qs.size(); ++pi) stats.add(Column::f64(qnames[pi], qs[pi]));
      vd.stats = std::move(stats);
    } else {
      // categorical: per by-group level table sorted by (weighted) count desc
      std::vector<std::optional<std::string>> group_col, level;
      std::vector<double> count;
      std::vector<double> perc;
      std::vector<std::int32_t> codes = detail::dense_codes(col, false);
      for (size_t k = 0; k < groups_rows.size(); ++k) {
        const auto& rows = groups_rows[k];
        std::unordered_map<std::int32_t, double> tally;
        std::unordered_map<std::int32_t, std::int64_t> first_row;
        double total = 0.0;
        for (auto i : rows) {
          if (!col.is_valid(i)) continue;
          double wi = wp ? wp->number_at(i) : 1.0;
          auto code = codes[static_cast<size_t>(i)];
          tally[code] += wi;
          first_row.emplace(code, i);
          total += wi;
        }
        std::vector<std::int32_t> order;
        order.reserve(tally.size());
        for (const auto& [code, cnt] : tally) order.push_back(code);
        std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
          double ca = tally.at(a), cb = tally.at(b);
          if (ca != cb) return ca > cb;
          return first_row.at(a) < first_row.at(b);
        });
        for (auto code : order) {
          if (by) group_col.push_back(by_labels[k]);
          else group_col.push_back(std::nullopt);
          level.push_back(value_to_string(col.value_at(first_row.at(code))));
          count.push_back(tally.at(code));
          perc.push_back(total > 0.0 ? 100.0 * tally.at(code) / total : 0.0);
        }
      }
      Frame stats;
      if (by) stats.add(Column::text("Group", group_col));
      stats.add(Column::text("Level", level));
      stats.add(Column::f64(wp ? "WeightSum" : "N", std::move(count)));
      stats.add(Column::f64("Perc", std::move(perc)));
      vd.stats = std::move(stats);
    }
    out.variables.push_back(std::move(vd));
  }
  return out;
}

Frame CrossTab::to_frame() const {
  Frame out;
  out.add(Column::text(row_name.empty() ? "level" : row_name,
                       std::vector<std::string>(row_labels)));
  for (std::int64_t c = 0; c < n_cols(); ++c) {
    std::string name = col_labels[static_cast<size_t>(c)];
    if (kind == CrossTabKind::count) {
      std::vector<std::int64_t> v(static_cast<size_t>(n_rows()));
      for (std::int64_t r = 0; r < n_rows(); ++r)
        v[static_cast<size_t>(r)] = counts[static_cast<size_t>(r * n_cols() + c)];
      out.add(Column::i64(name, std::move(v)));
    } else {
      std::vector<double> v(static_cast<size_t>(n_rows()), 0.0);
      std::vector<std::uint8_t> mask(static_cast<size_t>(n_rows()), 1);
      for (std::int64_t r = 0; r < n_rows(); ++r) {
        size_t cell = static_cast<size_t>(r * n_cols() + c);
        v[static_cast<size_t>(r)] = values[cell];
        if (kind == CrossTabKind::statistic) mask[static_cast<size_t>(r)] = valid[cell];
      }
      out.add(Column::f64(name, std::move(v), std::move(mask)));
    }
  }
  return out;
}

CrossTab cross_tab(const std::vector<Column>& cols, const Column* w,
                   std::optional<Stat> cell_stat, const Column* stat_weights,
                   std::optional<bool> sort) {
  if (cols.empty()) throw std::invalid_argument("cross_tab: no columns supplied");
  std::int64_t nrow = cols.front().size();
  for (const auto& c : cols) {
    if (c.size() != nrow) throw std::invalid_argument("cross_tab: column lengths differ");
  }
  if (w && w->size() != nrow)
    throw std::invalid_argument("cross_tab: weight column length differs");
  if (cell_stat && !w)
    throw std::invalid_argument("cross_tab: a cell statistic requires data in w");

  CrossTab out;
  bool one_dim = cols.size() == 1;

  Grouping grow, gcol;
  if (one_dim) {
    grow = group_by(cols.front(), sort, true);
    out.row_name = cols.front().name();
    out.row_labels = grow.group_labels();
    out.col_name = "";
    out.col_labels = {"N"};
  } else {
    std::vector<Column> rowcols(cols.begin(), cols.end() - 1);
    grow = group_by(Frame(rowcols), sort, true);
    gcol = group_by(cols.back(), sort, true);
    out.row_name = rowcols.front().name();
    for (size_t i = 1; i < rowcols.size(); ++i) out.row_name += "." + rowcols[i].name();
    out.col_name = cols.back().name();
    out.row_labels = grow.group_labels();
    out.col_labels = gcol.group_labels();
  }

  std::int64_t R = out.n_rows();
  std::int64_t C = out.n_cols();
  auto cell_of = [&](std::int64_t i) -> std::int64_t {
    std::int64_t r = grow.group_id()[static_cast<size_t>(i)];
    std::int64_t c = one_dim ? 0 : gcol.group_id()[static_cast<size_t>(i)];
    return r * C + c;
  };

  if (cell_stat) {
    out.kind = CrossTabKind::statistic;
    std::vector<Column> all = cols;
    Grouping gall = group_by(Frame(all), sort, false);
    StatOptions opts;
    opts.use_group_names = false;
    Column reduced = reduce(*cell_stat, *w, &gall, stat_weights, opts);
    out.values.assign(static_cast<size_t>(R * C), 0.0);
    out.valid.assign(static_cast<size_t>(R * C), 0);
    for (std::int64_t k = 0; k < gall.n_groups(); ++k) {
      std::int64_t row = gall.group_starts()[static_cast<size_t>(k)];
      std::int64_t cell = cell_of(row);
      if (reduced.is_valid(k)) {
        out.values[static_cast<size_t>(cell)] = reduced.number_at(k);
        out.valid[static_cast<size_t>(cell)] = 1;
      }
    }
    return out;
  }

  if (w) {
    out.kind = CrossTabKind::weight_sum;
    out.values.assign(static_cast<size_t>(R * C), 0.0);
    for (std::int64_t i = 0; i < nrow; ++i) {
      if (!w->is_valid(i)) continue;
      out.values[static_cast<size_t>(cell_of(i))] += w->number_at(i);
    }
    return out;
  }

  out.kind = CrossTabKind::count;
  out.counts.assign(static_cast<size_t>(R * C), 0);
  for (std::int64_t i = 0; i < nrow; ++i) out.counts[static_cast<size_t>(cell_of(i))]++;
  return out;
}

Frame varying(const Frame& frame, const Grouping& by) {
  if (by.nrow() != frame.nrow())
    throw std::invalid_argument("varying: grouping does not match frame rows");
  std::vector<std::string> names;
  std::vector<std::uint8_t> result;
  for (const auto& col : frame.columns()) {
    std::vector<std::int32_t> codes = detail::dense_codes(col, false);
    std::unordered_map<std::int32_t, std::int32_t> first_code;
    bool varies = false;
    for (std::int64_t i = 0; i < frame.nrow() && !varies; ++i) {
      if (!col.is_valid(i)) continue;
      std::int32_t g = by.group_id()[static_cast<size_t>(i)];
      auto [it, fresh] = first_code.emplace(g, codes[static_cast<size_t>(i)]);
      if (!fresh && it->second != codes[static_cast<size_t>(i)]) varies = true;
    }
    names.push_back(col.name());
    result.push_back(varies ? 1 : 0);
  }
  Frame out;
  out.add(Column::text("Variable", std::move(names)));
  out.add(Column::boolean("Varying", std::move(result)));
  return out;
}

Frame pairwise(PairwiseKind kind, const Frame& frame, const Column* w) {
  std::vector<const Column*> cols;
  for (const auto& c : frame.columns()) {
    if (kind == PairwiseKind::nobs || c.is_numeric()) cols.push_back(&c);
    else
      throw std::invalid_argument("pairwise: column " + c.name() + " is not numeric");
  }
  std::int64_t k = static_cast<std::int64_t>(cols.size());
  std::int64_t n = frame.nrow();
  if (w && w->size() != n) throw std::invalid_argument("pairwise: weight length differs");

  std::vector<std::vector<double>> data;
  data.reserve(static_cast<size_t>(k));
  for (auto* c : cols) {
    if (c->is_numeric()) data.push_back(c->to_f64());
    else data.emplace_back();
  }

  std::vector<double> cells(static_cast<size_t>(k * k), 0.0);
  std::vector<std::uint8_t> valid(static_cast<size_t>(k * k), 1);
  std::vector<std::int64_t> ncells(static_cast<size_t>(k * k), 0);

  for (std::int64_t a = 0; a < k; ++a) {
    for (std::int64_t b = a; b < k; ++b) {
      // pairwise-complete rows
      double wsum = 0.0, mx = 0.0, my = 0.0;
      std::int64_t nobs = 0;
      for (std::int64_t i = 0; i < n; ++i) {
        bool ok = cols[static_cast<size_t>(a)]->is_valid(i) &&
                  cols[static_cast<size_t>(b)]->is_valid(i) && (!w || w->is_valid(i));
        if (!ok) continue;
        ++nobs;
        if (kind == PairwiseKind::nobs) continue;
        double wi = w ? w->number_at(i) : 1.0;
        wsum += wi;
        mx += wi * data[static_cast<size_t>(a)][static_cast<size_t>(i)];
        my += wi * data[static_cast<size_t>(b)][static_cast<size_t>(i)];
      }
      size_t ab = static_cast<size_t>(a * k + b);
      size_t ba = static_cast<size_t>(b * k + a);
      if (kind == PairwiseKind::nobs) {
        ncells[ab] = ncells[ba] = nobs;
        continue;
      }
      if (wsum <= 1.0) {
        valid[ab] = valid[ba] = 0;
        continue;
      }
      mx /= wsum;
      my /= wsum;
      double sxy = 0.0, sxx = 0.0, syy = 0.0;
      for (std::int64_t i = 0; i < n; ++i) {
        bool ok = cols[static_cast<size_t>(a)]->is_valid(i) &&
                  cols[static_cast<size_t>(b)]->is_valid(i) && (!w || w->is_valid(i));
        if (!ok) continue;
        double wi = w ? w->number_at(i) : 1.0;
        double dx = data[static_cast<size_t>(a)][static_cast<size_t>(i)] - mx;
        double dy = data[static_cast<size_t>(b)][static_cast<size_t>(i)] - my;
        sxy += wi * dx * dy;
        sxx += wi * dx * dx;
        syy += wi * dy * dy;
      }
      if (kind == PairwiseKind::cov) {
        cells[ab] = cells[ba] = sxy / (wsum - 1.0);
      } else {
        if (a == b) {
          cells[ab] = 1.0;
        } else if (sxx > 0.0 && syy > 0.0) {
          cells[ab] = cells[ba] = sxy / std::sqrt(sxx * syy);
        } else {
          valid[ab] = valid[ba] = 0;
        }
      }
    }
  }

  Frame out;
  std::vector<std::string> names;
  for (auto* c : cols) names.push_back(c->name());
  out.add(Column::text("Variable", names));
  for (std::int64_t b = 0; b < k; ++b) {
    if (kind == PairwiseKind::nobs) {
      std::vector<std::int64_t> v(static_cast<size_t>(k));
      for (std::int64_t a = 0; a < k; ++a) v[static_cast<size_t>(a)] = ncells[static_cast<size_t>(a * k + b)];
      out.add(Column::i64(names[static_cast<size_t>(b)], std::move(v)));
    } else {
      std::vector<double> v(static_cast<size_t>(k));
      std::vector<std::uint8_t> m(static_cast<size_t>(k));
      for (std::int64_t a = 0; a < k; ++a) {
        v[static_cast<size_t>(a)] = cells[static_cast<size_t>(a * k + b)];
        m[static_cast<size_t>(a)] = valid[static_cast<size_t>(a * k + b)];
      }
      out.add(Column::f64(names[static_cast<size_t>(b)], std::move(v), std::move(m)));
    }
  }
  return out;
}

}  // namespace foldframe
