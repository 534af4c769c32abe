#include "foldframe/grouping.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace foldframe {

namespace detail {

std::uint64_t mix_hash(std::uint64_t h, std::uint64_t v) {
  // splitmix64 step folded into the running hash
  v += 0x9E3779B97F4A7C15ull;
  v = (v ^ (v >> 30)) * 0xBF58476D1CE4E5B9ull;
  v = (v ^ (v >> 27)) * 0x94D049BB133111EBull;
  v ^= v >> 31;
  return (h ^ v) * 0x2545F4914F6CDD1Dull;
}

namespace {

template <typename T>
std::vector<std::int32_t> code_values(const std::vector<T>& values,
                                      const std::vector<std::uint8_t>& valid, bool ranked,
                                      bool (*less)(const T&, const T&)) {
  std::unordered_map<T, std::int32_t> map;
  std::vector<T> uniques;
  std::vector<std::int32_t> codes(values.size(), -1);
  for (size_t i = 0; i < values.size(); ++i) {
    if (!valid[i]) continue;
    auto it = map.find(values[i]);
    if (it == map.end()) {
      it = map.emplace(values[i], static_cast<std::int32_t>(uniques.size())).first;
      uniques.push_back(values[i]);
    }
    codes[i] = it->second;
  }
  std::int32_t missing_code = static_cast<std::int32_t>(uniques.size());
  if (ranked && uniques.size() > 1) {
    std::vector<std::int32_t> rank_of(uniques.size());
    std::vector<std::int32_t> idx(uniques.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<std::int32_t>(i);
    std::sort(idx.begin(), idx.end(), [&](std::int32_t a, std::int32_t b) {
      return less(uniques[static_cast<size_t>(a)], uniques[static_cast<size_t>(b)]);
    });
    for (size_t r = 0; r < idx.size(); ++r) rank_of[static_cast<size_t>(idx[r])] = static_cast<std::int32_t>(r);
    for (auto& c : codes) {
      if (c >= 0) c = rank_of[static_cast<size_t>(c)];
    }
  }
  for (auto& c : codes) {
    if (c < 0) c = missing_code;  // missing sorts last and equals itself
  }
  return codes;
}

template <typename T>
bool lt(const T& a, const T& b) {
  return a < b;
}

double norm_zero(double d) { return d == 0.0 ? 0.0 : d; }

}  // namespace

std::vector<std::int32_t> dense_codes(const Column& col, bool ranked) {
  switch (col.kind()) {
    case ValueKind::float64: {
      std::vector<double> v = col.f64_data();
      for (auto& d : v) d = norm_zero(d);
      return code_values<double>(v, col.validity(), ranked, &lt<double>);
    }
    case ValueKind::int64:
      return code_values<std::int64_t>(col.i64_data(), col.validity(), ranked, &lt<std::int64_t>);
    case ValueKind::text:
      return code_values<std::string>(col.text_data(), col.validity(), ranked, &lt<std::string>);
    case ValueKind::boolean: {
      std::vector<std::int32_t> codes(col.size());
      // false < true; missing last
      for (std::int64_t i = 0; i < col.size(); ++i) {
        size_t idx = static_cast<size_t>(i);
        codes[idx] = col.is_valid(i) ? (col.bool_data()[idx] ? 1 : 0) : 2;
      }
      return codes;
    }
    case ValueKind::categorical: {
      // Level-table order is the sort order for categoricals.
      const auto& c = col.cat();
      std::vector<std::int32_t> codes(col.size());
      std::int32_t missing_code = static_cast<std::int32_t>(c.levels.size());
      for (std::int64_t i = 0; i < col.size(); ++i) {
        size_t idx = static_cast<size_t>(i);
        codes[idx] = col.is_valid(i) ? c.codes[idx] : missing_code;
      }
      return codes;
    }
  }
  throw std::logic_error("dense_codes: bad kind");
}

std::vector<std::int32_t> paired_dense_codes(const Column& x, const Column& y) {
  auto numericish = [](ValueKind k) {
    return k == ValueKind::float64 || k == ValueKind::int64 || k == ValueKind::boolean;
  };
  auto textish = [](ValueKind k) {
    return k == ValueKind::text || k == ValueKind::categorical;
  };
  size_t n = static_cast<size_t>(x.size());
  size_t m = static_cast<size_t>(y.size());
  std::vector<std::uint8_t> valid(n + m);
  for (size_t i = 0; i < n; ++i) valid[i] = x.validity()[i];
  for (size_t i = 0; i < m; ++i) valid[n + i] = y.validity()[i];
  if (numericish(x.kind()) && numericish(y.kind())) {
    std::vector<double> v(n + m, 0.0);
    for (std::int64_t i = 0; i < x.size(); ++i) {
      if (x.is_valid(i)) v[static_cast<size_t>(i)] = norm_zero(x.number_at(i));
    }
    for (std::int64_t i = 0; i < y.size(); ++i) {
      if (y.is_valid(i)) v[n + static_cast<size_t>(i)] = norm_zero(y.number_at(i));
    }
    return code_values<double>(v, valid, false, &lt<double>);
  }
  if (textish(x.kind()) && textish(y.kind())) {
    std::vector<std::string> v(n + m);
    for (std::int64_t i = 0; i < x.size(); ++i) {
      if (x.is_valid(i)) v[static_cast<size_t>(i)] = value_to_string(x.value_at(i));
    }
    for (std::int64_t i = 0; i < y.size(); ++i) {
      if (y.is_valid(i)) v[n + static_cast<size_t>(i)] = value_to_string(y.value_at(i));
    }
    return code_values<std::string>(v, valid, false, &lt<std::string>);
  }
  throw std::invalid_argument(std::string("incompatible key kinds: ") + x.name() + " is " +
                              kind_name(x.kind()) + ", " + y.name() + " is " +
                              kind_name(y.kind()));
}

}  // namespace detail

namespace {

// Row hashing + first-appearance numbering over per-column code tuples.
struct TupleGrouper {
  const std::vector<std::vector<std::int32_t>>& codes;
  std::int64_t nrow;

  std::vector<std::int32_t> gid;
  std::vector<std::int64_t> first_row;  // per group
  std::vector<std::int64_t> sizes;

  void run() {
    gid.resize(static_cast<size_t>(nrow));
    std::unordered_map<std::uint64_t, std::vector<std::int32_t>> buckets;
    buckets.reserve(static_cast<size_t>(nrow) * 2);
    for (std::int64_t row = 0; row < nrow; ++row) {
      std::uint64_t h = 0x8445D61A4E774912ull;
      for (const auto& col : codes) {
        h = detail::mix_hash(h, static_cast<std::uint64_t>(col[static_cast<size_t>(row)]));
      }
      auto& bucket = buckets[h];
      std::int32_t found = -1;
      for (std::int32_t candidate : bucket) {
        if (same_tuple(first_row[static_cast<size_t>(candidate)], row)) {
          found = candidate;
          break;
        }
      }
      if (found < 0) {
        found = static_cast<std::int32_t>(first_row.size());
        bucket.push_back(found);
        first_row.push_back(row);
        sizes.push_back(0);
      }
      gid[static_cast<size_t>(row)] = found;
      sizes[static_cast<size_t>(found)]++;
    }
  }

  bool same_tuple(std::int64_t a, std::int64_t b) const {
    for (const auto& col : codes) {
      if (col[static_cast<size_t>(a)] != col[static_cast<size_t>(b)]) return false;
    }
    return true;
  }
};

bool tuple_less(const std::vector<std::vector<std::int32_t>>& codes, std::int64_t a,
                std::int64_t b) {
  for (const auto& col : codes) {
    std::int32_t ca = col[static_cast<size_t>(a)];
    std::int32_t cb = col[static_cast<size_t>(b)];
    if (ca != cb) return ca < cb;
  }
  return false;
}

}  // namespace

Ordering stable_order(const std::vector<Column>& keys) {
  if (keys.empty()) throw std::invalid_argument("stable_order: zero key columns supplied");
  std::int64_t n = keys.front().size();
  for (const auto& k : keys) {
    if (k.size() != n) throw std::invalid_argument("stable_order: key lengths differ");
  }
  std::vector<std::vector<std::int32_t>> codes;
  codes.reserve(keys.size());
  for (const auto& k : keys) codes.push_back(detail::dense_codes(k, true));

  Ordering out;
  out.perm.resize(static_cast<size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) out.perm[static_cast<size_t>(i)] = i;
  std::stable_sort(out.perm.begin(), out.perm.end(),
                   [&](std::int64_t a, std::int64_t b) { return tuple_less(codes, a, b); });

  out.sorted = true;
  for (std::int64_t i = 1; i < n; ++i) {
    if (tuple_less(codes, i, i - 1)) {
      out.sorted = false;
      break;
    }
  }
  std::int64_t run = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    if (i == 0 || tuple_less(codes, out.perm[static_cast<size_t>(i - 1)],
                             out.perm[static_cast<size_t>(i)])) {
      out.starts.push_back(i);
      run = 0;
    }
    ++run;
    out.max_group_size = std::max(out.max_group_size, run);
  }
  return out;
}

Ordering stable_order(const Frame& keys) { return stable_order(keys.columns()); }

const Ordering& Grouping::ordering() const {
  std::lock_guard<std::mutex> lock(order_cache_->mutex);
  if (!order_cache_->value) {
    auto ord = std::make_unique<Ordering>();
    std::int64_t n = nrow();
    ord->perm.resize(static_cast<size_t>(n));
    ord->starts.resize(static_cast<size_t>(n_groups_));
    std::vector<std::int64_t> offset(static_cast<size_t>(n_groups_), 0);
    std::int64_t acc = 0;
    for (std::int64_t g = 0; g < n_groups_; ++g) {
      ord->starts[static_cast<size_t>(g)] = acc;
      offset[static_cast<size_t>(g)] = acc;
      acc += group_sizes_[static_cast<size_t>(g)];
      ord->max_group_size = std::max(ord->max_group_size, group_sizes_[static_cast<size_t>(g)]);
    }
    for (std::int64_t i = 0; i < n; ++i) {
      auto g = static_cast<size_t>(group_id_[static_cast<size_t>(i)]);
      ord->perm[static_cast<size_t>(offset[g]++)] = i;
    }
    ord->sorted = sorted_;
    order_cache_->value = std::move(ord);
  }
  return *order_cache_->value;
}

std::vector<std::string> Grouping::group_labels() const {
  if (!groups_) throw std::logic_error("group_labels: grouping was built without groups");
  std::vector<std::string> out;
  out.reserve(static_cast<size_t>(n_groups_));
  for (std::int64_t g = 0; g < n_groups_; ++g) {
    std::string s;
    for (std::int64_t c = 0; c < groups_->ncol(); ++c) {
      if (c > 0) s += ".";
      s += value_to_string(groups_->column(c).value_at(g));
    }
    out.push_back(std::move(s));
  }
  return out;
}

Grouping group_by(const Frame& keys, std::optional<bool> sort, bool return_groups) {
  if (keys.ncol() == 0) throw std::invalid_argument("group_by: zero key columns supplied");
  bool sorted_numbering = sort.value_or(get_options().sort);

  std::vector<std::vector<std::int32_t>> codes;
  codes.reserve(static_cast<size_t>(keys.ncol()));
  for (const auto& c : keys.columns()) codes.push_back(detail::dense_codes(c, sorted_numbering));

  TupleGrouper grouper{codes, keys.nrow(), {}, {}, {}};
  grouper.run();

  Grouping g;
  g.group_vars_ = keys.names();
  g.ordered_ = sorted_numbering;

  std::int64_t k = static_cast<std::int64_t>(grouper.first_row.size());
  if (sorted_numbering && k > 1) {
    std::vector<std::int32_t> order(static_cast<size_t>(k));
    for (std::int64_t i = 0; i < k; ++i) order[static_cast<size_t>(i)] = static_cast<std::int32_t>(i);
    std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
      return tuple_less(codes, grouper.first_row[static_cast<size_t>(a)],
                        grouper.first_row[static_cast<size_t>(b)]);
    });
    std::vector<std::int32_t> remap(static_cast<size_t>(k));
    for (std::int64_t r = 0; r < k; ++r) remap[static_cast<size_t>(order[static_cast<size_t>(r)])] = static_cast<std::int32_t>(r);
    g.group_id_.resize(grouper.gid.size());
    for (size_t i = 0; i < grouper.gid.size(); ++i)
      g.group_id_[i] = remap[static_cast<size_t>(grouper.gid[i])];
    g.group_sizes_.resize(static_cast<size_t>(k));
    g.group_starts_.resize(static_cast<size_t>(k));
    for (std::int64_t old = 0; old < k; ++old) {
      auto next = static_cast<size_t>(remap[static_cast<size_t>(old)]);
      g.group_sizes_[next] = grouper.sizes[static_cast<size_t>(old)];
      g.group_starts_[next] = grouper.first_row[static_cast<size_t>(old)];
    }
  } else {
    g.group_id_ = std::move(grouper.gid);
    g.group_sizes_ = std::move(grouper.sizes);
    g.group_starts_ = std::move(grouper.first_row);
  }
  g.n_groups_ = k;

  g.sorted_ = true;
  for (size_t i = 1; i < g.group_id_.size(); ++i) {
    if (g.group_id_[i] < g.group_id_[i - 1]) {
      g.sorted_ = false;
      break;
    }
  }
  if (return_groups) g.groups_ = keys.take(g.group_starts_);
  return g;
}

Grouping group_by(const Column& key, std::optional<bool> sort, bool return_groups) {
  return group_by(Frame({key}), sort, return_groups);
}

Frame unique_rows(const Frame& frame, const std::vector<std::string>& cols,
                  std::optional<bool> sort) {
  Frame keys = cols.empty() ? frame : select(frame, cols);
  if (keys.ncol() == 0) return frame;
  Grouping g = group_by(keys, sort, false);
  return frame.take(g.group_starts());
}

std::int64_t n_unique(const Column& col) {
  if (col.size() == 0) return 0;
  return group_by(col, false, false).n_groups();
}

std::int64_t n_unique(const Frame& frame) {
  if (frame.ncol() == 0 || frame.nrow() == 0) return 0;
  return group_by(frame, false, false).n_groups();
}

}  // namespace foldframe
