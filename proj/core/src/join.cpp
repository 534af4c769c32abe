#include "foldframe/join.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "foldframe/grouping.hpp"
#include "foldframe/options.hpp"

namespace foldframe {

const char* join_how_name(JoinHow how) {
  switch (how) {
    case JoinHow::left: return "left";
    case JoinHow::right: return "right";
    case JoinHow::inner: return "inner";
    case JoinHow::full: return "full";
    case JoinHow::semi: return "semi";
    case JoinHow::anti: return "anti";
  }
  return "?";
}

std::optional<JoinHow> join_how_from_name(const std::string& name) {
  if (name == "left") return JoinHow::left;
  if (name == "right") return JoinHow::right;
  if (name == "inner") return JoinHow::inner;
  if (name == "full") return JoinHow::full;
  if (name == "semi") return JoinHow::semi;
  if (name == "anti") return JoinHow::anti;
  return std::nullopt;
}

const char* join_validate_name(JoinValidate v) {
  switch (v) {
    case JoinValidate::m_m: return "m:m";
    case JoinValidate::one_m: return "1:m";
    case JoinValidate::m_one: return "m:1";
    case JoinValidate::one_one: return "1:1";
  }
  return "?";
}

std::optional<JoinValidate> join_validate_from_name(const std::string& name) {
  if (name == "m:m") return JoinValidate::m_m;
  if (name == "1:m") return JoinValidate::one_m;
  if (name == "m:1") return JoinValidate::m_one;
  if (name == "1:1") return JoinValidate::one_one;
  return std::nullopt;
}

namespace {

std::string pct1(double pct) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", pct);
  return buf;
}

// Per-key codes shared by both tables: xcodes[k][i] comparable with
// ycodes[k][j].
struct KeyCodes {
  std::vector<std::vector<std::int32_t>> x;
  std::vector<std::vector<std::int32_t>> y;
  std::int64_t nx = 0, ny = 0;
};

KeyCodes build_codes(const Frame& x_keys, const Frame& y_keys) {
  if (x_keys.ncol() != y_keys.ncol())
    throw std::invalid_argument("join: key column counts differ");
  if (x_keys.ncol() == 0) throw std::invalid_argument("join: no key columns");
  KeyCodes kc;
  kc.nx = x_keys.nrow();
  kc.ny = y_keys.nrow();
  for (std::int64_t k = 0; k < x_keys.ncol(); ++k) {
    std::vector<std::int32_t> both =
        detail::paired_dense_codes(x_keys.column(k), y_keys.column(k));
    kc.x.emplace_back(both.begin(), both.begin() + kc.nx);
    kc.y.emplace_back(both.begin() + kc.nx, both.end());
  }
  return kc;
}

std::uint64_t tuple_hash(const std::vector<std::vector<std::int32_t>>& codes, std::int64_t row,
                         std::int64_t nkeys) {
  std::uint64_t h = 0x8445D61A4E774912ull;
  for (std::int64_t k = 0; k < nkeys; ++k)
    h = detail::mix_hash(h, static_cast<std::uint64_t>(codes[static_cast<size_t>(k)][static_cast<size_t>(row)]));
  return h;
}

bool tuple_eq(const KeyCodes& kc, std::int64_t xrow, std::int64_t yrow, std::int64_t nkeys) {
  for (std::int64_t k = 0; k < nkeys; ++k) {
    if (kc.x[static_cast<size_t>(k)][static_cast<size_t>(xrow)] !=
        kc.y[static_cast<size_t>(k)][static_cast<size_t>(yrow)])
      return false;
  }
  return true;
}

// Hash table over y rows keyed by the first nkeys key columns.
struct YTable {
  std::unordered_map<std::uint64_t, std::vector<std::int64_t>> buckets;

  static YTable build(const KeyCodes& kc, std::int64_t nkeys) {
    YTable t;
    t.buckets.reserve(static_cast<size_t>(kc.ny) * 2);
    for (std::int64_t j = 0; j < kc.ny; ++j)
      t.buckets[tuple_hash(kc.y, j, nkeys)].push_back(j);
    return t;
  }

  // y rows matching x row, ascending.
  std::vector<std::int64_t> candidates(const KeyCodes& kc, std::int64_t xrow,
                                       std::int64_t nkeys) const {
    auto it = buckets.find(tuple_hash(kc.x, xrow, nkeys));
    std::vector<std::int64_t> out;
    if (it == buckets.end()) return out;
    for (auto j : it->second) {
      if (tuple_eq(kc, xrow, j, nkeys)) out.push_back(j);
    }
    return out;
  }
};

std::vector<std::int64_t> first_matches(const KeyCodes& kc, std::int64_t nkeys) {
  YTable t = YTable::build(kc, nkeys);
  std::vector<std::int64_t> m(static_cast<size_t>(kc.nx), -1);
  for (std::int64_t i = 0; i < kc.nx; ++i) {
    auto cand = t.candidates(kc, i, nkeys);
    if (!cand.empty()) m[static_cast<size_t>(i)] = cand.front();
  }
  return m;
}

MatchResult summarize_matches(std::vector<std::int64_t> positions, std::int64_t ny) {
  MatchResult r;
  r.positions = std::move(positions);
  r.n_groups = ny;
  std::unordered_set<std::int64_t> distinct;
  for (auto p : r.positions) {
    if (p < 0) ++r.n_nomatch;
    else distinct.insert(p);
  }
  r.n_distinct = static_cast<std::int64_t>(distinct.size());
  return r;
}

void run_overid_check(const KeyCodes& kc, std::int64_t nkeys, MatchResult& r) {
  if (nkeys < 3) return;
  const auto& full = r.positions;
  for (std::int64_t j = 2; j < nkeys; ++j) {
    if (first_matches(kc, j) == full) {
      r.overidentified = true;
      r.keys_needed = static_cast<int>(j);
      return;
    }
  }
}

bool rows_unique(const std::vector<std::vector<std::int32_t>>& codes, std::int64_t nrow,
                 std::int64_t nkeys) {
  std::unordered_map<std::uint64_t, std::vector<std::int64_t>> seen;
  seen.reserve(static_cast<size_t>(nrow) * 2);
  for (std::int64_t i = 0; i < nrow; ++i) {
    auto& bucket = seen[tuple_hash(codes, i, nkeys)];
    for (auto other : bucket) {
      bool eq = true;
      for (std::int64_t k = 0; k < nkeys; ++k) {
        if (codes[static_cast<size_t>(k)][static_cast<size_t>(i)] !=
            codes[static_cast<size_t>(k)][static_cast<size_t>(other)]) {
          eq = false;
          break;
        }
      }
      if (eq) return false;
    }
    bucket.push_back(i);
  }
  return true;
}

Column promote_pair_column(const std::string& name, const Column& a, const Column& b,
                           const std::vector<std::int64_t>& a_rows,
                           const std::vector<std::int64_t>& b_rows) {
  // per output row: value from a when a_rows >= 0, else from b
  size_t n = a_rows.size();
  std::vector<Value> vals(n);
  for (size_t i = 0; i < n; ++i) {
    if (a_rows[i] >= 0) vals[i] = a.value_at(a_rows[i]);
    else if (b_rows[i] >= 0) vals[i] = b.value_at(b_rows[i]);
  }
  bool numeric = a.is_numeric() && b.is_numeric();
  std::vector<std::uint8_t> mask(n, 0);
  if (numeric) {
    bool all_int = a.kind() != ValueKind::float64 && b.kind() != ValueKind::float64;
    if (all_int) {
      std::vector<std::int64_t> v(n, 0);
      for (size_t i = 0; i < n; ++i) {
        if (value_missing(vals[i])) continue;
        mask[i] = 1;
        if (std::holds_alternative<std::int64_t>(vals[i])) v[i] = std::get<std::int64_t>(vals[i]);
        else v[i] = std::get<bool>(vals[i]) ? 1 : 0;
      }
      Column out = Column::i64(name, std::move(v), std::move(mask));
      out.set_label(a.label());
      return out;
    }
    std::vector<double> v(n, 0.0);
    for (size_t i = 0; i < n; ++i) {
      if (value_missing(vals[i])) continue;
      mask[i] = 1;
      if (std::holds_alternative<double>(vals[i])) v[i] = std::get<double>(vals[i]);
      else if (std::holds_alternative<std::int64_t>(vals[i]))
        v[i] = static_cast<double>(std::get<std::int64_t>(vals[i]));
      else v[i] = std::get<bool>(vals[i]) ? 1.0 : 0.0;
    }
    Column out = Column::f64(name, std::move(v), std::move(mask));
    out.set_label(a.label());
    return out;
  }
  std::vector<std::string> v(n);
  for (size_t i = 0; i < n; ++i) {
    if (value_missing(vals[i])) continue;
    mask[i] = 1;
    v[i] = value_to_string(vals[i]);
  }
  Column out = Column::text(name, std::move(v), std::move(mask));
  out.set_label(a.label());
  return out;
}

}  // namespace

MatchResult match_first(const Frame& x_keys, const Frame& y_keys, bool overid_check) {
  KeyCodes kc = build_codes(x_keys, y_keys);
  std::int64_t nkeys = x_keys.ncol();
  MatchResult r = summarize_matches(first_matches(kc, nkeys), kc.ny);
  if (overid_check) run_overid_check(kc, nkeys, r);
  return r;
}

JoinResult join(const Frame& x, const Frame& y, const JoinSpec& spec, const VerboseSink& sink) {
  int verbose = spec.verbose.value_or(get_options().verbose);
  auto emit = [&](const std::string& line) {
    if (sink && verbose >= 1) sink(line);
  };

  // resolve key pairs
  std::vector<std::pair<std::string, std::string>> on = spec.on;
  if (on.empty()) {
    for (const auto& name : x.names()) {
      if (y.has(name)) on.emplace_back(name, name);
    }
    if (on.empty()) throw std::invalid_argument("join: no shared columns to join on");
  }
  std::vector<std::string> xk, yk;
  for (const auto& [a, b] : on) {
    if (!x.has(a)) throw std::invalid_argument("join: unknown key column " + a + " in " + spec.x_name);
    if (!y.has(b)) throw std::invalid_argument("join: unknown key column " + b + " in " + spec.y_name);
    xk.push_back(a);
    yk.push_back(b);
  }

  KeyCodes kc = build_codes(select(x, xk), select(y, yk));
  std::int64_t nkeys = static_cast<std::int64_t>(on.size());

  // key uniqueness drives validate and the relationship string
  bool x_unique = rows_unique(kc.x, kc.nx, nkeys);
  bool y_unique = rows_unique(kc.y, kc.ny, nkeys);
  auto unique_phrase = [&](const std::string& table, const char* side, bool unique) {
    return table + " (" + side + ") is " + (unique ? "unique" : "not unique") +
           " on the join columns";
  };
  bool validate_ok = true;
  switch (spec.validate) {
    case JoinValidate::one_one: validate_ok = x_unique && y_unique; break;
    case JoinValidate::one_m: validate_ok = x_unique; break;
    case JoinValidate::m_one: validate_ok = y_unique; break;
    case JoinValidate::m_m: break;
  }
  if (!validate_ok) {
    throw std::invalid_argument("Join is not " + std::string(join_validate_name(spec.validate)) +
                                ": " + unique_phrase(spec.x_name, "x", x_unique) + "; " +
                                unique_phrase(spec.y_name, "y", y_unique));
  }

  YTable ytab = YTable::build(kc, nkeys);
  std::vector<std::vector<std::int64_t>> cand(static_cast<size_t>(kc.nx));
  std::vector<std::int64_t> first(static_cast<size_t>(kc.nx), -1);
  std::vector<std::uint8_t> y_hit(static_cast<size_t>(kc.ny), 0);
  std::unordered_set<std::int64_t> y_rows_used;
  std::int64_t x_matched = 0;
  for (std::int64_t i = 0; i < kc.nx; ++i) {
    cand[static_cast<size_t>(i)] = ytab.candidates(kc, i, nkeys);
    const auto& c = cand[static_cast<size_t>(i)];
    if (!c.empty()) {
      first[static_cast<size_t>(i)] = c.front();
      ++x_matched;
      for (auto j : c) y_hit[static_cast<size_t>(j)] = 1;
      if (spec.multiple) {
        y_rows_used.insert(c.begin(), c.end());
      } else {
        y_rows_used.insert(c.front());
      }
    }
  }
  std::int64_t y_matched = 0;
  for (auto h : y_hit) y_matched += h;

  MatchResult match = summarize_matches(first, kc.ny);
  if (spec.multiple) match.n_distinct = static_cast<std::int64_t>(y_rows_used.size());
  run_overid_check(kc, nkeys, match);
  if (match.overidentified) {
    emit("overidentified join: the first " + std::to_string(match.keys_needed) + " of " +
         std::to_string(nkeys) + " key columns already determine all matches");
  }

  // report + require checks
  JoinReport report;
  report.how = spec.how;
  report.x_keys = xk;
  report.y_keys = yk;
  report.x_rows = kc.nx;
  report.y_rows = kc.ny;
  report.x_matched = x_matched;
  report.y_matched = y_matched;
  report.x_pct = kc.nx > 0 ? 100.0 * static_cast<double>(x_matched) / static_cast<double>(kc.nx) : 0.0;
  report.y_pct = kc.ny > 0 ? 100.0 * static_cast<double>(y_matched) / static_cast<double>(kc.ny) : 0.0;
  report.relationship = std::string(x_unique ? "1" : "m") + ":" + (y_unique ? "1" : "m");
  report.match = match;

  auto key_list = [](const std::vector<std::string>& keys) {
    std::string s;
    for (size_t i = 0; i < keys.size(); ++i) {
      if (i) s += ", ";
      s += keys[i];
    }
    return s;
  };
  report.header = std::string(join_how_name(spec.how)) + " join: " + spec.x_name + "[" +
                  key_list(xk) + "] " + std::to_string(x_matched) + "/" + std::to_string(kc.nx) +
                  " (" + pct1(report.x_pct) + "%) <" + report.relationship + "> " + spec.y_name +
                  "[" + key_list(yk) + "] " + std::to_string(y_matched) + "/" +
                  std::to_string(kc.ny) + " (" + pct1(report.y_pct) + "%)";
  emit(report.header);

  if (spec.require_x && report.x_pct < *spec.require_x * 100.0) {
    throw std::invalid_argument("Matched " + pct1(report.x_pct) + "% of records in " +
                                spec.x_name + " (x), but at least " +
                                pct1(*spec.require_x * 100.0) + "% are required");
  }
  if (spec.require_y && report.y_pct < *spec.require_y * 100.0) {
    throw std::invalid_argument("Matched " + pct1(report.y_pct) + "% of records in " +
                                spec.y_name + " (y), but at least " +
                                pct1(*spec.require_y * 100.0) + "% are required");
  }

  // assemble output rows as (x_row, y_row) pairs
  std::vector<std::int64_t> x_rows, y_rows;
  auto expand_left = [&](bool keep_unmatched) {
    for (std::int64_t i = 0; i < kc.nx; ++i) {
      const auto& c = cand[static_cast<size_t>(i)];
      if (c.empty()) {
        if (keep_unmatched) {
          x_rows.push_back(i);
          y_rows.push_back(-1);
        }
      } else if (spec.multiple) {
        for (auto j : c) {
          x_rows.push_back(i);
          y_rows.push_back(j);
        }
      } else {
        x_rows.push_back(i);
        y_rows.push_back(c.front());
      }
    }
  };

  bool x_cols_only = spec.how == JoinHow::semi || spec.how == JoinHow::anti;
  switch (spec.how) {
    case JoinHow::left:
      expand_left(true);
      break;
    case JoinHow::inner:
      expand_left(false);
      break;
    case JoinHow::full:
      expand_left(true);
      for (std::int64_t j = 0; j < kc.ny; ++j) {
        if (!y_hit[static_cast<size_t>(j)]) {
          x_rows.push_back(-1);
          y_rows.push_back(j);
        }
      }
      break;
    case JoinHow::semi:
      for (std::int64_t i = 0; i < kc.nx; ++i) {
        if (!cand[static_cast<size_t>(i)].empty()) {
          x_rows.push_back(i);
          y_rows.push_back(-1);
        }
      }
      break;
    case JoinHow::anti:
      for (std::int64_t i = 0; i < kc.nx; ++i) {
        if (cand[static_cast<size_t>(i)].empty()) {
          x_rows.push_back(i);
          y_rows.push_back(-1);
        }
      }
      break;
    case JoinHow::right: {
      // all y rows, matched against x first-occurrences
      std::unordered_map<std::uint64_t, std::vector<std::int64_t>> xmap;
      xmap.reserve(static_cast<size_t>(kc.nx) * 2);
      for (std::int64_t i = 0; i < kc.nx; ++i)
        xmap[tuple_hash(kc.x, i, nkeys)].push_back(i);
      for (std::int64_t j = 0; j < kc.ny; ++j) {
        auto it = xmap.find(tuple_hash(kc.y, j, nkeys));
        std::vector<std::int64_t> xs;
        if (it != xmap.end()) {
          for (auto i : it->second) {
            if (tuple_eq(kc, i, j, nkeys)) xs.push_back(i);
          }
        }
        if (xs.empty()) {
          x_rows.push_back(-1);
          y_rows.push_back(j);
        } else if (spec.multiple) {
          for (auto i : xs) {
            x_rows.push_back(i);
            y_rows.push_back(j);
          }
        } else {
          x_rows.push_back(xs.front());
          y_rows.push_back(j);
        }
      }
      break;
    }
  }

  // duplicate non-key columns
  std::unordered_set<std::string> xkey_set(xk.begin(), xk.end());
  std::unordered_set<std::string> ykey_set(yk.begin(), yk.end());
  std::vector<std::string> dup_cols;
  for (const auto& c : y.columns()) {
    if (ykey_set.count(c.name())) continue;
    if (x.has(c.name())) dup_cols.push_back(c.name());
  }
  std::unordered_set<std::string> drop_x, drop_y;
  std::unordered_set<std::string> rename_y;
  std::string suffix = spec.suffix.value_or("_" + spec.y_name);
  if (!dup_cols.empty() && !x_cols_only) {
    std::vector<std::string> renamed, dropped;
    for (const auto& c : dup_cols) {
      switch (spec.drop_dup_cols) {
        case DropDupCols::none:
          rename_y.insert(c);
          renamed.push_back(c);
          break;
        case DropDupCols::x:
          // key columns cannot be dropped from x; fall back to renaming y's
          if (xkey_set.count(c)) {
            rename_y.insert(c);
            renamed.push_back(c);
          } else {
            drop_x.insert(c);
            dropped.push_back(c);
          }
          break;
        case DropDupCols::y:
          drop_y.insert(c);
          dropped.push_back(c);
          break;
      }
    }
    if (!renamed.empty())
      report.duplicate_column_actions.push_back("duplicate columns: " + key_list(renamed) +
                                                " => renamed using suffix '" + suffix +
                                                "' for y");
    if (!dropped.empty())
      report.duplicate_column_actions.push_back(
          "duplicate columns: " + key_list(dropped) + " => dropped from " +
          (spec.drop_dup_cols == DropDupCols::x ? "x" : "y"));
    for (const auto& line : report.duplicate_column_actions) emit(line);
  }

  // build output columns: x block (keys resolved against both sides), then y
  Frame out;
  bool keys_from_both = spec.how == JoinHow::full || spec.how == JoinHow::right;
  for (const auto& c : x.columns()) {
    if (drop_x.count(c.name())) continue;
    auto key_pos = std::find(xk.begin(), xk.end(), c.name());
    if (key_pos != xk.end() && keys_from_both) {
      const Column& yc = y.column(yk[static_cast<size_t>(key_pos - xk.begin())]);
      out.add(promote_pair_column(c.name(), c, yc, x_rows, y_rows));
    } else {
      out.add(c.take_opt(x_rows));
    }
  }
  if (!x_cols_only) {
    for (const auto& c : y.columns()) {
      if (ykey_set.count(c.name()) || drop_y.count(c.name())) continue;
      Column col = c.take_opt(y_rows);
      if (rename_y.count(c.name())) {
        col.rename(c.name() + suffix);
        if (out.has(col.name()))
          throw std::invalid_argument("join: suffixed column " + col.name() +
                                      " collides with an existing column");
      }
      out.add(std::move(col));
    }
  }
  if (spec.match_column) {
    std::string name = spec.match_column->empty() ? ".join" : *spec.match_column;
    std::vector<std::int32_t> codes(x_rows.size(), 0);
    for (size_t i = 0; i < x_rows.size(); ++i) {
      bool has_x = x_rows[i] >= 0;
      bool has_y = spec.how == JoinHow::semi ? true : y_rows[i] >= 0;
      if (spec.how == JoinHow::anti) has_y = false;
      codes[i] = has_x && has_y ? 0 : (has_x ? 1 : 2);
    }
    out.add(Column::categorical(name, std::move(codes),
                                {"matched", spec.x_name, spec.y_name}));
  }

  if (spec.sort) {
    std::vector<Column> sort_keys;
    for (const auto& k : xk) sort_keys.push_back(out.column(k));
    Ordering ord = stable_order(sort_keys);
    out = out.take_opt(ord.perm);
  }

  return JoinResult{std::move(out), std::move(report)};
}

}  // namespace foldframe
