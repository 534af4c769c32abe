#include "foldframe/pivot.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "foldframe/grouping.hpp"
#include "value_assembly.hpp"

namespace foldframe {

std::optional<PivotAgg> pivot_agg_from_name(const std::string& name) {
  if (name == "first") return PivotAgg::first;
  if (name == "last") return PivotAgg::last;
  if (name == "sum") return PivotAgg::sum;
  if (name == "mean") return PivotAgg::mean;
  if (name == "min") return PivotAgg::min;
  if (name == "max") return PivotAgg::max;
  if (name == "count") return PivotAgg::count;
  return std::nullopt;
}

namespace {

std::vector<std::string> complement(const Frame& frame,
                                    const std::vector<const std::vector<std::string>*>& used) {
  std::unordered_set<std::string> taken;
  for (const auto* v : used) {
    for (const auto& s : *v) taken.insert(s);
  }
  std::vector<std::string> out;
  for (const auto& name : frame.names()) {
    if (!taken.count(name)) out.push_back(name);
  }
  return out;
}

void check_exists(const Frame& frame, const std::vector<std::string>& cols) {
  for (const auto& c : cols) {
    if (!frame.has(c)) throw std::invalid_argument("pivot: unknown column " + c);
  }
}

ValueKind promote_all(const Frame& frame, const std::vector<std::string>& values) {
  ValueKind kind = frame.column(values.front()).kind();
  for (size_t i = 1; i < values.size(); ++i)
    kind = detail::promote_kinds(kind, frame.column(values[i]).kind());
  return kind;
}

Frame pivot_longer(const Frame& frame, const PivotSpec& spec) {
  check_exists(frame, spec.ids);
  check_exists(frame, spec.values);
  std::vector<std::string> values = spec.values;
  std::vector<std::string> ids = spec.ids;
  if (values.empty()) values = complement(frame, {&ids});
  if (ids.empty() && !spec.values.empty()) ids = complement(frame, {&values});
  if (values.empty()) throw std::invalid_argument("pivot: no value columns to stack");

  std::int64_t n = frame.nrow();
  std::int64_t m = static_cast<std::int64_t>(values.size());
  std::int64_t n_out = n * m;

  // replicate ids per stacked block
  std::vector<std::int64_t> rep(static_cast<size_t>(n_out));
  for (std::int64_t b = 0; b < m; ++b) {
    for (std::int64_t i = 0; i < n; ++i) rep[static_cast<size_t>(b * n + i)] = i;
  }

  Frame out;
  for (const auto& id : ids) out.add(frame.column(id).take(rep));

  // variable column: categorical with levels in source-column order
  std::vector<std::int32_t> var_codes(static_cast<size_t>(n_out));
  for (std::int64_t b = 0; b < m; ++b) {
    std::fill(var_codes.begin() + b * n, var_codes.begin() + (b + 1) * n,
              static_cast<std::int32_t>(b));
  }
  out.add(Column::categorical(spec.variable_name, std::move(var_codes), values));

  if (spec.label_name) {
    std::vector<std::string> lab(static_cast<size_t>(n_out));
    std::vector<std::uint8_t> mask(static_cast<size_t>(n_out), 0);
    for (std::int64_t b = 0; b < m; ++b) {
      const auto& label = frame.column(values[static_cast<size_t>(b)]).label();
      if (!label) continue;
      for (std::int64_t i = 0; i < n; ++i) {
        lab[static_cast<size_t>(b * n + i)] = *label;
        mask[static_cast<size_t>(b * n + i)] = 1;
      }
    }
    out.add(Column::text(*spec.label_name, std::move(lab), std::move(mask)));
  }

  ValueKind target = promote_all(frame, values);
  std::vector<Value> vals(static_cast<size_t>(n_out));
  for (std::int64_t b = 0; b < m; ++b) {
    const Column& src = frame.column(values[static_cast<size_t>(b)]);
    for (std::int64_t i = 0; i < n; ++i)
      vals[static_cast<size_t>(b * n + i)] = src.value_at(i);
  }
  Column value_col = target == ValueKind::categorical
                         ? [&] {
                             Column c = frame.column(values.front());
                             c = c.take(rep);
                             c.rename(spec.value_name);
                             return c;
                           }()
                         : detail::assemble_values(spec.value_name, target, vals);
  out.add(std::move(value_col));

  if (spec.na_rm) {
    const Column& vc = out.column(spec.value_name);
    std::vector<std::uint8_t> keep(static_cast<size_t>(n_out));
    for (std::int64_t i = 0; i < n_out; ++i) keep[static_cast<size_t>(i)] = vc.is_valid(i) ? 1 : 0;
    out = filter_rows(out, keep);
  }
  return out;
}

// Aggregates one value column into cells in a single pass and materializes
// the result as a column of n_cells entries (cell index order).
Column materialize_cells(const Column& src, const std::vector<std::int64_t>& cell_of_row,
                         std::int64_t n_cells, PivotAgg agg, bool na_rm,
                         const std::optional<Value>& fill) {
  bool numeric_agg = agg == PivotAgg::sum || agg == PivotAgg::mean || agg == PivotAgg::min ||
                     agg == PivotAgg::max;
  if (numeric_agg && !src.is_numeric())
    throw std::invalid_argument("pivot: aggregation requires numeric values, column " +
                                src.name() + " is " + kind_name(src.kind()));

  size_t nc = static_cast<size_t>(n_cells);
  std::vector<std::int64_t> row(nc, -1);   // representative row (first/last)
  std::vector<double> acc(nc, 0.0);        // sum / running mean numerator / extremum
  std::vector<double> cnt(nc, 0.0);        // mean denominator
  std::vector<std::int64_t> placed(nc, 0); // rows mapped to the cell
  std::vector<std::uint8_t> has_value(nc, 0);

  for (std::int64_t i = 0; i < src.size(); ++i) {
    std::int64_t cell = cell_of_row[static_cast<size_t>(i)];
    if (cell < 0) continue;
    bool valid = src.is_valid(i);
    if (na_rm && !valid) continue;
    size_t c = static_cast<size_t>(cell);
    placed[c]++;
    switch (agg) {
      case PivotAgg::first:
        if (row[c] < 0) row[c] = i;
        break;
      case PivotAgg::last:
        row[c] = i;
        break;
      case PivotAgg::count:
        break;
      default: {
        if (!valid) break;
        double value = src.number_at(i);
        switch (agg) {
          case PivotAgg::sum:
            acc[c] += value;
            break;
          case PivotAgg::mean:
            acc[c] += value;
            cnt[c] += 1.0;
            break;
          case PivotAgg::min:
            if (!has_value[c] || value < acc[c]) acc[c] = value;
            break;
          case PivotAgg::max:
            if (!has_value[c] || value > acc[c]) acc[c] = value;
            break;
          default:
            break;
        }
        has_value[c] = 1;
        break;
      }
    }
  }

  Column out;
  if (agg == PivotAgg::first || agg == PivotAgg::last) {
    out = src.take_opt(row);
  } else if (agg == PivotAgg::count) {
    out = Column::i64(src.name(), placed);
  } else {
    std::vector<double> v(nc, 0.0);
    std::vector<std::uint8_t> mask(nc, 0);
    for (size_t c = 0; c < nc; ++c) {
      if (!has_value[c]) continue;
      if (agg == PivotAgg::mean) {
        if (cnt[c] <= 0.0) continue;
        v[c] = acc[c] / cnt[c];
      } else {
        v[c] = acc[c];
      }
      mask[c] = 1;
    }
    out = Column::f64(src.name(), std::move(v), std::move(mask));
    out.set_label(src.label());
  }

  if (fill && !value_missing(*fill)) {
    // absent cells take the fill value
    std::vector<Value> vals(nc);
    for (size_t c = 0; c < nc; ++c) {
      vals[c] = placed[c] > 0 ? out.value_at(static_cast<std::int64_t>(c)) : *fill;
    }
    ValueKind k = out.kind() == ValueKind::categorical ? ValueKind::text : out.kind();
    Column filled = detail::assemble_values(out.name(), k, vals);
    filled.set_label(out.label());
    return filled;
  }
  return out;
}

void check_duplicate_cells(const std::vector<std::int64_t>& cell_of_row, std::int64_t n_cells,
                           const std::string& what) {
  std::vector<std::uint8_t> seen(static_cast<size_t>(n_cells), 0);
  for (size_t i = 0; i < cell_of_row.size(); ++i) {
    std::int64_t c = cell_of_row[i];
    if (c < 0) continue;
    if (seen[static_cast<size_t>(c)])
      throw std::invalid_argument("pivot: duplicate cells, " + what +
                                  " do not uniquely identify the rows (first duplicate at row " +
                                  std::to_string(i) + ")");
    seen[static_cast<size_t>(c)] = 1;
  }
}

std::string join_with(const std::vector<std::string>& parts, const std::string& sep) {
  std::string s;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) s += sep;
    s += parts[i];
  }
  return s;
}

Frame pivot_wider(const Frame& frame, const PivotSpec& spec) {
  if (spec.names_cols.empty())
    throw std::invalid_argument("pivot: wider requires names columns");
  check_exists(frame, spec.names_cols);
  check_exists(frame, spec.label_cols);
  check_exists(frame, spec.ids);
  check_exists(frame, spec.values);

  std::vector<std::string> ids = spec.ids;
  std::vector<std::string> values = spec.values;
  if (ids.empty()) ids = complement(frame, {&values, &spec.names_cols, &spec.label_cols});
  if (values.empty()) values = complement(frame, {&ids, &spec.names_cols, &spec.label_cols});
  if (ids.empty()) throw std::invalid_argument("pivot: wider requires id columns");
  if (values.empty()) throw std::invalid_argument("pivot: wider requires value columns");

  Grouping gid = group_by(select(frame, ids), spec.sort, true);
  Grouping gnm = group_by(select(frame, spec.names_cols), spec.sort, true);
  std::int64_t n_rows_out = gid.n_groups();
  std::int64_t n_levels = gnm.n_groups();

  // level name strings joined with "_", level labels joined with " - "
  std::vector<std::string> level_names(static_cast<size_t>(n_levels));
  std::vector<std::optional<std::string>> level_labels(static_cast<size_t>(n_levels));
  for (std::int64_t l = 0; l < n_levels; ++l) {
    std::int64_t row = gnm.group_starts()[static_cast<size_t>(l)];
    std::vector<std::string> parts;
    for (const auto& nc : spec.names_cols)
      parts.push_back(value_to_string(frame.column(nc).value_at(row)));
    level_names[static_cast<size_t>(l)] = join_with(parts, "_");
    if (!spec.label_cols.empty()) {
      std::vector<std::string> lparts;
      for (const auto& lc : spec.label_cols) {
        Value v = frame.column(lc).value_at(row);
        if (!value_missing(v)) lparts.push_back(value_to_string(v));
      }
      if (!lparts.empty()) level_labels[static_cast<size_t>(l)] = join_with(lparts, " - ");
    }
  }

  // cell index per source row: id group x name level
  std::vector<std::int64_t> cell_of_row(static_cast<size_t>(frame.nrow()));
  for (std::int64_t i = 0; i < frame.nrow(); ++i) {
    std::int64_t gi = gid.group_id()[static_cast<size_t>(i)];
    std::int64_t li = gnm.group_id()[static_cast<size_t>(i)];
    cell_of_row[static_cast<size_t>(i)] = gi * n_levels + li;
  }
  if (spec.check_dups)
    check_duplicate_cells(cell_of_row, n_rows_out * n_levels,
                          "the id and name columns");

  Frame out = *gid.groups();

  const Stat* stat_agg = std::get_if<Stat>(&spec.agg);
  Grouping gcombined;
  std::vector<std::int64_t> cell_of_group;
  if (stat_agg) {
    // vectorized route: reduce over the (ids x names) interaction, then place
    std::vector<std::string> combo = ids;
    combo.insert(combo.end(), spec.names_cols.begin(), spec.names_cols.end());
    gcombined = group_by(select(frame, combo), false, false);
    cell_of_group.assign(static_cast<size_t>(gcombined.n_groups()), -1);
    for (std::int64_t k = 0; k < gcombined.n_groups(); ++k) {
      std::int64_t row = gcombined.group_starts()[static_cast<size_t>(k)];
      cell_of_group[static_cast<size_t>(k)] = cell_of_row[static_cast<size_t>(row)];
    }
  }

  StatOptions agg_opts;
  agg_opts.use_group_names = false;
  for (const auto& vname : values) {
    const Column& src = frame.column(vname);
    Column cells_col;
    if (stat_agg) {
      Column reduced = reduce(*stat_agg, src, &gcombined, nullptr, agg_opts);
      std::vector<std::int64_t> pick(static_cast<size_t>(n_rows_out * n_levels), -1);
      for (std::int64_t k = 0; k < gcombined.n_groups(); ++k)
        pick[static_cast<size_t>(cell_of_group[static_cast<size_t>(k)])] = k;
      cells_col = reduced.take_opt(pick);
    } else {
      cells_col = materialize_cells(src, cell_of_row, n_rows_out * n_levels,
                                    std::get<PivotAgg>(spec.agg), spec.na_rm, spec.fill);
    }
    // slice the flat cell column into one output column per name level
    for (std::int64_t l = 0; l < n_levels; ++l) {
      std::vector<std::int64_t> idx(static_cast<size_t>(n_rows_out));
      for (std::int64_t r = 0; r < n_rows_out; ++r)
        idx[static_cast<size_t>(r)] = r * n_levels + l;
      Column col = cells_col.take(idx);
      col.rename(values.size() > 1 ? vname + "_" + level_names[static_cast<size_t>(l)]
                                   : level_names[static_cast<size_t>(l)]);
      const auto& vlab = src.label();
      const auto& llab = level_labels[static_cast<size_t>(l)];
      if (vlab && llab) col.set_label(*vlab + " - " + *llab);
      else if (llab) col.set_label(*llab);
      else col.set_label(vlab);
      out.add(std::move(col));
    }
  }
  return out;
}

Frame pivot_recast(const Frame& frame, const PivotSpec& spec) {
  if (spec.names_from.empty())
    throw std::invalid_argument("pivot: recast requires a names source column");
  check_exists(frame, {spec.names_from});
  if (spec.labels_from) check_exists(frame, {*spec.labels_from});
  check_exists(frame, spec.ids);
  check_exists(frame, spec.values);

  std::vector<std::string> reserved = {spec.names_from};
  if (spec.labels_from) reserved.push_back(*spec.labels_from);

  std::vector<std::string> ids = spec.ids;
  std::vector<std::string> values = spec.values;
  if (ids.empty()) ids = complement(frame, {&values, &reserved});
  if (values.empty()) values = complement(frame, {&ids, &reserved});
  if (values.empty()) throw std::invalid_argument("pivot: recast requires value columns");
  if (ids.empty()) throw std::invalid_argument("pivot: recast requires id columns");

  std::int64_t m = static_cast<std::int64_t>(values.size());
  Grouping gnm = group_by(frame.column(spec.names_from), spec.sort, true);
  std::int64_t n_levels = gnm.n_groups();

  Grouping gid;
  std::int64_t n_id_groups = 1;
  bool has_ids = !ids.empty();
  if (has_ids) {
    gid = group_by(select(frame, ids), spec.sort, true);
    n_id_groups = gid.n_groups();
  }

  // level strings and their labels
  std::vector<std::string> level_names(static_cast<size_t>(n_levels));
  std::vector<std::optional<std::string>> level_labels(static_cast<size_t>(n_levels));
  for (std::int64_t l = 0; l < n_levels; ++l) {
    std::int64_t row = gnm.group_starts()[static_cast<size_t>(l)];
    level_names[static_cast<size_t>(l)] =
        value_to_string(frame.column(spec.names_from).value_at(row));
    if (spec.labels_from) {
      Value v = frame.column(*spec.labels_from).value_at(row);
      if (!value_missing(v)) level_labels[static_cast<size_t>(l)] = value_to_string(v);
    }
  }

  // cell = id group x level; representative/aggregated per cell and value col
  std::vector<std::int64_t> cell_of_row(static_cast<size_t>(frame.nrow()));
  for (std::int64_t i = 0; i < frame.nrow(); ++i) {
    std::int64_t gi = has_ids ? gid.group_id()[static_cast<size_t>(i)] : 0;
    std::int64_t li = gnm.group_id()[static_cast<size_t>(i)];
    cell_of_row[static_cast<size_t>(i)] = gi * n_levels + li;
  }
  if (spec.check_dups)
    check_duplicate_cells(cell_of_row, n_id_groups * n_levels, "the id and name columns");

  std::int64_t n_cells = n_id_groups * n_levels;
  const Stat* stat_agg = std::get_if<Stat>(&spec.agg);
  Grouping gcombined;
  std::vector<std::int64_t> cell_of_group;
  if (stat_agg) {
    std::vector<std::string> combo = ids;
    combo.push_back(spec.names_from);
    gcombined = group_by(select(frame, combo), false, false);
    cell_of_group.assign(static_cast<size_t>(gcombined.n_groups()), -1);
    for (std::int64_t k = 0; k < gcombined.n_groups(); ++k)
      cell_of_group[static_cast<size_t>(k)] =
          cell_of_row[static_cast<size_t>(gcombined.group_starts()[static_cast<size_t>(k)])];
  }

  // flat cell columns per source value column
  StatOptions agg_opts;
  agg_opts.use_group_names = false;
  std::vector<Column> cell_cols;
  cell_cols.reserve(static_cast<size_t>(m));
  for (const auto& vname : values) {
    const Column& src = frame.column(vname);
    if (stat_agg) {
      Column reduced = reduce(*stat_agg, src, &gcombined, nullptr, agg_opts);
      std::vector<std::int64_t> pick(static_cast<size_t>(n_cells), -1);
      for (std::int64_t k = 0; k < gcombined.n_groups(); ++k)
        pick[static_cast<size_t>(cell_of_group[static_cast<size_t>(k)])] = k;
      cell_cols.push_back(reduced.take_opt(pick));
    } else {
      cell_cols.push_back(materialize_cells(src, cell_of_row, n_cells,
                                            std::get<PivotAgg>(spec.agg), spec.na_rm,
                                            spec.fill));
    }
  }

  // output rows: value-column major, id groups inner
  std::int64_t n_out = n_id_groups * m;
  Frame out;
  if (has_ids) {
    std::vector<std::int64_t> id_rows(static_cast<size_t>(n_out));
    for (std::int64_t b = 0; b < m; ++b) {
      for (std::int64_t g = 0; g < n_id_groups; ++g)
        id_rows[static_cast<size_t>(b * n_id_groups + g)] = g;
    }
    Frame keys = gid.groups()->take(id_rows);
    for (const auto& c : keys.columns()) out.add(c);
  }

  // names.to column: old value-column names
  {
    std::vector<std::string> nm(static_cast<size_t>(n_out));
    for (std::int64_t b = 0; b < m; ++b) {
      std::fill(nm.begin() + b * n_id_groups, nm.begin() + (b + 1) * n_id_groups,
                values[static_cast<size_t>(b)]);
    }
    out.add(Column::text(spec.names_to, std::move(nm)));
  }
  if (spec.labels_to) {
    std::vector<std::string> lt(static_cast<size_t>(n_out));
    std::vector<std::uint8_t> mask(static_cast<size_t>(n_out), 0);
    for (std::int64_t b = 0; b < m; ++b) {
      const auto& lab = frame.column(values[static_cast<size_t>(b)]).label();
      if (!lab) continue;
      for (std::int64_t g = 0; g < n_id_groups; ++g) {
        lt[static_cast<size_t>(b * n_id_groups + g)] = *lab;
        mask[static_cast<size_t>(b * n_id_groups + g)] = 1;
      }
    }
    out.add(Column::text(*spec.labels_to, std::move(lt), std::move(mask)));
  }

  // one output column per names_from level
  ValueKind target = promote_all(frame, values);
  if (target == ValueKind::categorical) target = ValueKind::text;
  for (std::int64_t l = 0; l < n_levels; ++l) {
    std::vector<Value> vals(static_cast<size_t>(n_out));
    for (std::int64_t b = 0; b < m; ++b) {
      const Column& cells = cell_cols[static_cast<size_t>(b)];
      for (std::int64_t g = 0; g < n_id_groups; ++g) {
        vals[static_cast<size_t>(b * n_id_groups + g)] = cells.value_at(g * n_levels + l);
      }
    }
    ValueKind col_kind = target;
    if (std::holds_alternative<PivotAgg>(spec.agg)) {
      PivotAgg a = std::get<PivotAgg>(spec.agg);
      if (a == PivotAgg::sum || a == PivotAgg::mean || a == PivotAgg::min || a == PivotAgg::max)
        col_kind = ValueKind::float64;
      if (a == PivotAgg::count) col_kind = ValueKind::int64;
    }
    Column col = detail::assemble_values(level_names[static_cast<size_t>(l)], col_kind, vals);
    if (level_labels[static_cast<size_t>(l)]) col.set_label(level_labels[static_cast<size_t>(l)]);
    out.add(std::move(col));
  }
  return out;
}

}  // namespace

Frame pivot(const Frame& frame, const PivotSpec& spec) {
  switch (spec.mode) {
    case PivotMode::longer: return pivot_longer(frame, spec);
    case PivotMode::wider: return pivot_wider(frame, spec);
    case PivotMode::recast: return pivot_recast(frame, spec);
  }
  throw std::logic_error("pivot: bad mode");
}

}  // namespace foldframe
