#pragma once

#include <string>
#include <vector>

#include "foldframe/column.hpp"

namespace foldframe {

// Ordered collection of equal-length, uniquely named columns.
class Frame {
 public:
  Frame() = default;
  explicit Frame(std::vector<Column> columns);

  std::int64_t nrow() const { return nrow_; }
  std::int64_t ncol() const { return static_cast<std::int64_t>(columns_.size()); }
  bool empty() const { return columns_.empty(); }

  const std::vector<Column>& columns() const { return columns_; }
  const Column& column(std::int64_t i) const;
  const Column& column(const std::string& name) const;
  Column& column_mut(std::int64_t i);
  bool has(const std::string& name) const;
  std::int64_t position(const std::string& name) const;  // -1 if absent
  std::vector<std::string> names() const;

  // Appends a column; name must be new, length must match (any length when
  // the frame is empty).
  void add(Column col);

  Frame take(const std::vector<std::int64_t>& idx) const;
  Frame take_opt(const std::vector<std::int64_t>& idx) const;

 private:
  std::vector<Column> columns_;
  std::int64_t nrow_ = 0;
};

// Columns in requested order; unknown names / out-of-range positions throw.
Frame select(const Frame& frame, const std::vector<std::string>& names);
Frame select(const Frame& frame, const std::vector<std::int64_t>& positions);

// Rows where mask is true (original order), or rows at the given 0-based
// indices (requested order).
Frame filter_rows(const Frame& frame, const std::vector<std::uint8_t>& keep);
Frame filter_rows(const Frame& frame, const std::vector<std::int64_t>& indices);

// Appends new's columns after frame's. Row counts must agree and names must
// not collide.
Frame add_vars(const Frame& frame, const Frame& extra);

// Overview table: Variable, Class, [N, Ndist,] Label.
Frame namlab(const Frame& frame, bool with_stats = false);

// Count of distinct non-missing values in a column.
std::int64_t n_distinct_values(const Column& col);

}  // namespace foldframe
