#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "foldframe/frame.hpp"
#include "foldframe/options.hpp"

namespace foldframe {

// Stable ascending permutation over a column tuple, with the first position
// of each distinct key run and the largest run length.
struct Ordering {
  std::vector<std::int64_t> perm;
  std::vector<std::int64_t> starts;
  std::int64_t max_group_size = 0;
  bool sorted = false;  // input rows were already in ascending key order
};

Ordering stable_order(const std::vector<Column>& keys);
Ordering stable_order(const Frame& keys);

// Precomputed grouping structure consumed by all grouped kernels. Immutable
// once built; the ordering permutation is materialized lazily on first use.
class Grouping {
 public:
  Grouping() = default;

  std::int64_t n_groups() const { return n_groups_; }
  std::int64_t nrow() const { return static_cast<std::int64_t>(group_id_.size()); }
  // Per-row group index in [0, n_groups).
  const std::vector<std::int32_t>& group_id() const { return group_id_; }
  const std::vector<std::int64_t>& group_sizes() const { return group_sizes_; }
  // Unique key rows, one per group in group order; present iff requested.
  const std::optional<Frame>& groups() const { return groups_; }
  const std::vector<std::string>& group_vars() const { return group_vars_; }
  bool ordered() const { return ordered_; }  // keys were sorted at creation
  bool sorted() const { return sorted_; }    // group ids are non-decreasing over rows
  // First-occurrence row index of each group.
  const std::vector<std::int64_t>& group_starts() const { return group_starts_; }
  // Permutation grouping rows by group id (ascending, stable), cached.
  const Ordering& ordering() const;

  // Key tuple of each group joined with "." (requires groups()).
  std::vector<std::string> group_labels() const;

  friend Grouping group_by(const Frame& keys, std::optional<bool> sort, bool return_groups);

 private:
  std::int64_t n_groups_ = 0;
  std::vector<std::int32_t> group_id_;
  std::vector<std::int64_t> group_sizes_;
  std::optional<Frame> groups_;
  std::vector<std::string> group_vars_;
  bool ordered_ = false;
  bool sorted_ = false;
  std::vector<std::int64_t> group_starts_;

  struct OrderCache {
    std::mutex mutex;
    std::unique_ptr<Ordering> value;
  };
  std::shared_ptr<OrderCache> order_cache_ = std::make_shared<OrderCache>();
};

// Builds a grouping over one or more key columns. sort=true numbers groups in
// ascending key order (multi-key lexicographic, missing last); sort=false in
// first-appearance order. The default follows the engine sort option.
Grouping group_by(const Frame& keys, std::optional<bool> sort = std::nullopt,
                  bool return_groups = true);
Grouping group_by(const Column& key, std::optional<bool> sort = std::nullopt,
                  bool return_groups = true);

// One row per distinct key combination (first occurrence); row order follows
// appearance (sort=false) or key order (sort=true).
Frame unique_rows(const Frame& frame, const std::vector<std::string>& cols = {},
                  std::optional<bool> sort = std::nullopt);

// Distinct tuple count; a missing value counts as a distinct value equal to
// itself.
std::int64_t n_unique(const Column& col);
std::int64_t n_unique(const Frame& frame);

// Internal utilities shared with joins and pivots.
namespace detail {

// Injective per-row codes for one column; missing values get their own code.
// When ranked, code order equals ascending value order with missing last.
std::vector<std::int32_t> dense_codes(const Column& col, bool ranked);

// Codes over the concatenation of two kind-reconciled columns (x rows first).
// Throws on incompatible kinds.
std::vector<std::int32_t> paired_dense_codes(const Column& x, const Column& y);

std::uint64_t mix_hash(std::uint64_t h, std::uint64_t v);

}  // namespace detail

}  // namespace foldframe
