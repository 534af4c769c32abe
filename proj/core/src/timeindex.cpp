#include "foldframe/timeindex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace foldframe {

namespace {

double float_gcd(double a, double b, double tol) {
  while (b > tol) {
    double r = std::fmod(a, b);
    if (r < tol || b - r < tol) r = 0.0;
    a = b;
    b = r;
  }
  return a;
}

std::string format_time_label(double t) {
  return value_to_string(Value{t});
}

}  // namespace

TimeId time_id(const Column& t) {
  if (!t.is_numeric())
    throw std::invalid_argument("time column " + t.name() + " must be numeric");
  std::vector<double> raw = t.to_f64();
  std::vector<double> distinct;
  for (std::int64_t i = 0; i < t.size(); ++i) {
    if (t.is_valid(i)) distinct.push_back(raw[static_cast<size_t>(i)]);
  }
  if (distinct.empty())
    throw std::invalid_argument("time column " + t.name() + " has no non-missing values");
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  TimeId out;
  out.source_name = t.name();
  out.origin = distinct.front();
  out.n_periods = static_cast<std::int64_t>(distinct.size());

  if (distinct.size() == 1) {
    out.gcd = 1.0;
    out.span = 1;
  } else {
    std::vector<double> deltas;
    deltas.reserve(distinct.size() - 1);
    double max_delta = 0.0;
    for (size_t i = 1; i < distinct.size(); ++i) {
      deltas.push_back(distinct[i] - distinct[i - 1]);
      max_delta = std::max(max_delta, deltas.back());
    }
    double tol = 1e-9 * max_delta;
    double min_delta = *std::min_element(deltas.begin(), deltas.end());
    double g = deltas[0];
    for (size_t i = 1; i < deltas.size(); ++i) g = float_gcd(std::max(g, deltas[i]), std::min(g, deltas[i]), tol);
    // non-commensurable deltas drive the Euclid result towards the tolerance;
    // refuse divisors implying absurdly fine grids
    bool ok = g > tol && g >= 1e-6 * min_delta;
    if (ok) {
      for (double d : deltas) {
        double r = std::fmod(d, g);
        if (r > tol && g - r > tol) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) {
      g = min_delta;
      out.approx = true;
    }
    out.gcd = g;
    out.span = static_cast<std::int64_t>(std::llround((distinct.back() - distinct.front()) / g)) + 1;
  }

  std::vector<std::int64_t> ids(static_cast<size_t>(t.size()), 0);
  std::vector<std::uint8_t> mask(static_cast<size_t>(t.size()), 0);
  for (std::int64_t i = 0; i < t.size(); ++i) {
    if (!t.is_valid(i)) continue;
    size_t ii = static_cast<size_t>(i);
    ids[ii] = static_cast<std::int64_t>(std::llround((raw[ii] - out.origin) / out.gcd)) + 1;
    mask[ii] = 1;
  }
  out.ids = Column::i64(t.name(), std::move(ids), std::move(mask));
  return out;
}

std::string PanelIndex::summary() const {
  std::string s;
  if (has_groups) s += group_name + " [" + std::to_string(groups.n_groups()) + "] | ";
  s += time_name + " [" + std::to_string(time.n_periods);
  if (time.n_periods < time.span) s += " (" + std::to_string(time.span) + ")";
  s += "]";
  return s;
}

PanelIndex make_index(const Frame& frame, const std::vector<std::string>& id_cols,
                      const std::string& time_col, std::optional<bool> sort) {
  PanelIndex ix;
  ix.nrow = frame.nrow();
  ix.time_name = time_col;
  ix.time = time_id(frame.column(time_col));

  if (!id_cols.empty()) {
    ix.has_groups = true;
    ix.groups = group_by(select(frame, id_cols), sort, true);
    ix.group_name = id_cols.front();
    for (size_t i = 1; i < id_cols.size(); ++i) ix.group_name += "." + id_cols[i];
  }

  // (group, time) pairs must identify rows
  std::unordered_map<std::int64_t, std::int64_t> seen;
  seen.reserve(static_cast<size_t>(frame.nrow()) * 2);
  const auto& tid = ix.time.ids;
  for (std::int64_t i = 0; i < frame.nrow(); ++i) {
    if (!tid.is_valid(i)) continue;
    std::int64_t gid = ix.has_groups ? ix.groups.group_id()[static_cast<size_t>(i)] : 0;
    std::int64_t key = (gid << 32) | tid.i64_data()[static_cast<size_t>(i)];
    auto [it, fresh] = seen.emplace(key, i);
    if (!fresh) {
      std::string gname = ix.has_groups
                              ? ix.groups.group_labels()[static_cast<size_t>(gid)]
                              : "";
      std::string tval = value_to_string(frame.column(time_col).value_at(i));
      std::string pair = ix.has_groups ? "(" + gname + ", " + tval + ")" : "(" + tval + ")";
      throw std::invalid_argument("index_by: duplicate (" +
                                  (ix.has_groups ? ix.group_name + ", " : "") + time_col +
                                  ") pair " + pair + " at rows " + std::to_string(it->second) +
                                  " and " + std::to_string(i));
    }
  }
  return ix;
}

IndexedFrame index_by(const Frame& frame, const std::vector<std::string>& id_cols,
                      const std::string& time_col, std::optional<bool> sort) {
  return IndexedFrame{frame, make_index(frame, id_cols, time_col, sort)};
}

namespace {

// Row index of the observation n steps back within each group, or -1.
std::vector<std::int64_t> partner_rows(std::int64_t nrow, std::int64_t n, const Grouping* g,
                                       const TimeId* t) {
  std::vector<std::int64_t> partner(static_cast<size_t>(nrow), -1);
  if (t) {
    if (t->ids.size() != nrow)
      throw std::invalid_argument("time ids cover " + std::to_string(t->ids.size()) +
                                  " rows, expected " + std::to_string(nrow));
    std::unordered_map<std::int64_t, std::int64_t> where;
    where.reserve(static_cast<size_t>(nrow) * 2);
    const auto& tid = t->ids;
    for (std::int64_t i = 0; i < nrow; ++i) {
      if (!tid.is_valid(i)) continue;
      std::int64_t gid = g ? g->group_id()[static_cast<size_t>(i)] : 0;
      std::int64_t key = (gid << 32) | tid.i64_data()[static_cast<size_t>(i)];
      auto [it, fresh] = where.emplace(key, i);
      if (!fresh)
        throw std::invalid_argument("time values are not unique within groups (rows " +
                                    std::to_string(it->second) + " and " + std::to_string(i) +
                                    ")");
    }
    for (std::int64_t i = 0; i < nrow; ++i) {
      if (!tid.is_valid(i)) continue;
      std::int64_t gid = g ? g->group_id()[static_cast<size_t>(i)] : 0;
      std::int64_t want = tid.i64_data()[static_cast<size_t>(i)] - n;
      auto it = where.find((gid << 32) | want);
      if (it != where.end()) partner[static_cast<size_t>(i)] = it->second;
    }
    return partner;
  }

  if (g) {
    const auto& gid = g->group_id();
    for (size_t i = 1; i < gid.size(); ++i) {
      if (gid[i] < gid[i - 1])
        throw std::invalid_argument(
            "panel operations without a time variable require group-contiguous rows");
    }
    const auto& starts = g->group_starts();
    const auto& sizes = g->group_sizes();
    for (std::int64_t i = 0; i < nrow; ++i) {
      std::int64_t k = gid[static_cast<size_t>(i)];
      std::int64_t pos = i - starts[static_cast<size_t>(k)];
      std::int64_t want = pos - n;
      if (want >= 0 && want < sizes[static_cast<size_t>(k)])
        partner[static_cast<size_t>(i)] = starts[static_cast<size_t>(k)] + want;
    }
    return partner;
  }

  for (std::int64_t i = 0; i < nrow; ++i) {
    std::int64_t want = i - n;
    if (want >= 0 && want < nrow) partner[static_cast<size_t>(i)] = want;
  }
  return partner;
}

std::string step_stub(std::int64_t n, const char* suffix) {
  // growth/diff elide the step count for single leads, matching L2G1 / FG1
  if (n == 0) return "";
  std::string s;
  if (n < 0) {
    s = "F";
    if (suffix[0] == '\0' || n != -1) s += std::to_string(-n);
  } else {
    if (suffix[0] != '\0' && n == 1) {
      // "G1"/"D1" carry no lag prefix
    } else {
      s = "L" + std::to_string(n);
    }
  }
  return s + suffix;
}

}  // namespace

Column shift(const Column& x, std::int64_t n, const Grouping* g, const TimeId* t,
             const Value& fill) {
  if (g && g->nrow() != x.size())
    throw std::invalid_argument("grouping covers " + std::to_string(g->nrow()) +
                                " rows, column " + x.name() + " has " +
                                std::to_string(x.size()));
  if (n == 0) return x;
  std::vector<std::int64_t> partner = partner_rows(x.size(), n, g, t);
  Column out = x.take_opt(partner);
  if (value_missing(fill)) return out;

  // substitute the fill value where no partner period exists
  std::int64_t nrow = out.size();
  std::vector<std::uint8_t> mask = out.validity();
  auto fill_number = [&]() -> double {
    if (std::holds_alternative<double>(fill)) return std::get<double>(fill);
    if (std::holds_alternative<std::int64_t>(fill))
      return static_cast<double>(std::get<std::int64_t>(fill));
    if (std::holds_alternative<bool>(fill)) return std::get<bool>(fill) ? 1.0 : 0.0;
    throw std::invalid_argument("shift: fill value is not numeric");
  };
  Column res;
  switch (out.kind()) {
    case ValueKind::float64: {
      std::vector<double> v = out.f64_data();
      for (std::int64_t i = 0; i < nrow; ++i) {
        if (partner[static_cast<size_t>(i)] < 0) {
          v[static_cast<size_t>(i)] = fill_number();
          mask[static_cast<size_t>(i)] = 1;
        }
      }
      res = Column::f64(x.name(), std::move(v), std::move(mask));
      break;
    }
    case ValueKind::int64: {
      std::vector<std::int64_t> v = out.i64_data();
      for (std::int64_t i = 0; i < nrow; ++i) {
        if (partner[static_cast<size_t>(i)] < 0) {
          v[static_cast<size_t>(i)] = static_cast<std::int64_t>(fill_number());
          mask[static_cast<size_t>(i)] = 1;
        }
      }
      res = Column::i64(x.name(), std::move(v), std::move(mask));
      break;
    }
    case ValueKind::text: {
      if (!std::holds_alternative<std::string>(fill))
        throw std::invalid_argument("shift: fill value is not text");
      std::vector<std::string> v = out.text_data();
      for (std::int64_t i = 0; i < nrow; ++i) {
        if (partner[static_cast<size_t>(i)] < 0) {
          v[static_cast<size_t>(i)] = std::get<std::string>(fill);
          mask[static_cast<size_t>(i)] = 1;
        }
      }
      res = Column::text(x.name(), std::move(v), std::move(mask));
      break;
    }
    default:
      throw std::invalid_argument("shift: fill values are not supported for " +
                                  std::string(kind_name(out.kind())) + " columns");
  }
  res.set_label(x.label());
  return res;
}

Frame shift(const Column& x, const std::vector<std::int64_t>& ns, const Grouping* g,
            const TimeId* t, const Value& fill) {
  Frame out;
  for (auto n : ns) {
    Column c = shift(x, n, g, t, fill);
    if (n != 0) c.rename(step_stub(n, ""));
    out.add(std::move(c));
  }
  return out;
}

Column diff(const Column& x, std::int64_t n, const Grouping* g, const TimeId* t, bool log) {
  if (!x.is_numeric())
    throw std::invalid_argument("diff requires a numeric column, " + x.name() + " is " +
                                kind_name(x.kind()));
  if (n == 0) return x;
  std::vector<std::int64_t> partner = partner_rows(x.size(), n, g, t);
  std::vector<double> xd = x.to_f64();
  std::int64_t nrow = x.size();

  bool int_result = x.kind() == ValueKind::int64 && !log;
  std::vector<double> out(static_cast<size_t>(nrow), 0.0);
  std::vector<std::uint8_t> mask(static_cast<size_t>(nrow), 0);
  for (std::int64_t i = 0; i < nrow; ++i) {
    size_t ii = static_cast<size_t>(i);
    std::int64_t p = partner[ii];
    if (p < 0 || !x.is_valid(i) || !x.is_valid(p)) continue;
    double cur = xd[ii], prev = xd[static_cast<size_t>(p)];
    double res;
    if (log) {
      if (cur <= 0.0 || prev <= 0.0) continue;
      res = std::log(cur) - std::log(prev);
    } else {
      res = cur - prev;
    }
    out[ii] = res;
    mask[ii] = 1;
  }
  Column result;
  if (int_result) {
    std::vector<std::int64_t> iv(static_cast<size_t>(nrow), 0);
    for (std::int64_t i = 0; i < nrow; ++i) {
      if (mask[static_cast<size_t>(i)])
        iv[static_cast<size_t>(i)] = std::llround(out[static_cast<size_t>(i)]);
    }
    result = Column::i64(x.name(), std::move(iv), std::move(mask));
  } else {
    result = Column::f64(x.name(), std::move(out), std::move(mask));
  }
  result.set_label(x.label());
  return result;
}

Frame diff(const Column& x, const std::vector<std::int64_t>& ns, const Grouping* g,
           const TimeId* t, bool log) {
  Frame out;
  for (auto n : ns) {
    Column c = diff(x, n, g, t, log);
    if (n != 0) c.rename(step_stub(n, "D1"));
    out.add(std::move(c));
  }
  return out;
}

Column growth(const Column& x, std::int64_t n, const Grouping* g, const TimeId* t, double power,
              double scale) {
  if (!x.is_numeric())
    throw std::invalid_argument("growth requires a numeric column, " + x.name() + " is " +
                                kind_name(x.kind()));
  if (n == 0) {
    Column out = x;
    return out;
  }
  std::vector<std::int64_t> partner = partner_rows(x.size(), n, g, t);
  std::vector<double> xd = x.to_f64();
  std::int64_t nrow = x.size();
  std::vector<double> out(static_cast<size_t>(nrow), 0.0);
  std::vector<std::uint8_t> mask(static_cast<size_t>(nrow), 0);
  for (std::int64_t i = 0; i < nrow; ++i) {
    size_t ii = static_cast<size_t>(i);
    std::int64_t p = partner[ii];
    if (p < 0 || !x.is_valid(i) || !x.is_valid(p)) continue;
    double ratio = xd[ii] / xd[static_cast<size_t>(p)];
    double res = (std::pow(ratio, power) - 1.0) * scale;
    if (std::isnan(res)) continue;
    out[ii] = res;
    mask[ii] = 1;
  }
  Column result = Column::f64(x.name(), std::move(out), std::move(mask));
  result.set_label(x.label());
  return result;
}

Frame growth(const Column& x, const std::vector<std::int64_t>& ns, const Grouping* g,
             const TimeId* t, double power, double scale) {
  Frame out;
  for (auto n : ns) {
    Column c = growth(x, n, g, t, power, scale);
    if (n != 0) c.rename(step_stub(n, "G1"));
    out.add(std::move(c));
  }
  return out;
}

Column cumsum_by(const Column& x, const Grouping* g, const std::vector<std::int64_t>* ord) {
  if (!x.is_numeric())
    throw std::invalid_argument("cumsum requires a numeric column, " + x.name() + " is " +
                                kind_name(x.kind()));
  if (g && g->nrow() != x.size())
    throw std::invalid_argument("grouping covers " + std::to_string(g->nrow()) +
                                " rows, column " + x.name() + " has " +
                                std::to_string(x.size()));
  std::int64_t n = x.size();
  std::vector<std::int64_t> order;
  if (ord) {
    if (static_cast<std::int64_t>(ord->size()) != n)
      throw std::invalid_argument("ordering length does not match row count");
    std::vector<std::uint8_t> seen(static_cast<size_t>(n), 0);
    for (auto i : *ord) {
      if (i < 0 || i >= n || seen[static_cast<size_t>(i)])
        throw std::invalid_argument("ordering is not a permutation of the row indices");
      seen[static_cast<size_t>(i)] = 1;
    }
    order = *ord;
  } else {
    order.resize(static_cast<size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
  }

  std::int64_t K = g ? g->n_groups() : 1;
  bool int_result = x.kind() == ValueKind::int64 || x.kind() == ValueKind::boolean;
  std::vector<double> acc(static_cast<size_t>(K), 0.0);
  std::vector<std::int64_t> iacc(static_cast<size_t>(K), 0);
  std::vector<double> out(static_cast<size_t>(n), 0.0);
  std::vector<std::int64_t> iout(static_cast<size_t>(n), 0);
  std::vector<std::uint8_t> mask(static_cast<size_t>(n), 0);
  for (std::int64_t j = 0; j < n; ++j) {
    std::int64_t i = order[static_cast<size_t>(j)];
    size_t ii = static_cast<size_t>(i);
    std::int64_t k = g ? g->group_id()[ii] : 0;
    if (!x.is_valid(i)) continue;  // contributes nothing, stays missing in place
    if (int_result) {
      iacc[static_cast<size_t>(k)] += static_cast<std::int64_t>(x.number_at(i));
      iout[ii] = iacc[static_cast<size_t>(k)];
    } else {
      acc[static_cast<size_t>(k)] += x.number_at(i);
      out[ii] = acc[static_cast<size_t>(k)];
    }
    mask[ii] = 1;
  }
  Column result = int_result ? Column::i64(x.name(), std::move(iout), std::move(mask))
                             : Column::f64(x.name(), std::move(out), std::move(mask));
  result.set_label(x.label());
  return result;
}

Frame panel_matrix(const IndexedSeries& series) {
  const PanelIndex& ix = series.index;
  if (series.values.size() != ix.nrow)
    throw std::invalid_argument("panel_matrix: series length does not match its index");
  std::int64_t n_groups = ix.n_ids();
  std::int64_t span = ix.time.span;

  // cell -> source row
  std::vector<std::int64_t> cell(static_cast<size_t>(n_groups * span), -1);
  const auto& tid = ix.time.ids;
  for (std::int64_t i = 0; i < ix.nrow; ++i) {
    if (!tid.is_valid(i)) continue;
    std::int64_t gid = ix.has_groups ? ix.groups.group_id()[static_cast<size_t>(i)] : 0;
    std::int64_t period = tid.i64_data()[static_cast<size_t>(i)] - 1;
    cell[static_cast<size_t>(gid * span + period)] = i;
  }

  Frame out;
  std::vector<std::string> labels =
      ix.has_groups ? ix.groups.group_labels() : std::vector<std::string>{"series"};
  out.add(Column::text(ix.has_groups ? ix.group_name : "group", std::move(labels)));
  for (std::int64_t pcol = 0; pcol < span; ++pcol) {
    std::vector<std::int64_t> rows(static_cast<size_t>(n_groups));
    for (std::int64_t k = 0; k < n_groups; ++k)
      rows[static_cast<size_t>(k)] = cell[static_cast<size_t>(k * span + pcol)];
    Column c = series.values.take_opt(rows);
    c.rename(format_time_label(ix.time.origin + static_cast<double>(pcol) * ix.time.gcd));
    out.add(std::move(c));
  }
  return out;
}

bool is_irregular(const PanelIndex& ix) {
  std::int64_t n_groups = ix.n_ids();
  std::vector<std::int64_t> min_id(static_cast<size_t>(n_groups),
                                   std::numeric_limits<std::int64_t>::max());
  std::vector<std::int64_t> max_id(static_cast<size_t>(n_groups),
                                   std::numeric_limits<std::int64_t>::min());
  std::vector<std::int64_t> count(static_cast<size_t>(n_groups), 0);
  const auto& tid = ix.time.ids;
  for (std::int64_t i = 0; i < ix.nrow; ++i) {
    if (!tid.is_valid(i)) continue;
    size_t gid = ix.has_groups ? static_cast<size_t>(ix.groups.group_id()[static_cast<size_t>(i)])
                               : 0;
    std::int64_t id = tid.i64_data()[static_cast<size_t>(i)];
    min_id[gid] = std::min(min_id[gid], id);
    max_id[gid] = std::max(max_id[gid], id);
    count[gid]++;
  }
  for (std::int64_t k = 0; k < n_groups; ++k) {
    size_t ki = static_cast<size_t>(k);
    if (count[ki] == 0) continue;
    // periods are unique per group, so a shortfall means an internal gap
    if (count[ki] < max_id[ki] - min_id[ki] + 1) return true;
  }
  return false;
}

}  // namespace foldframe
