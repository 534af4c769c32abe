#include "foldframe/frame.hpp"

#include <stdexcept>
#include <unordered_set>

namespace foldframe {

Frame::Frame(std::vector<Column> columns) {
  for (auto& c : columns) add(std::move(c));
}

const Column& Frame::column(std::int64_t i) const {
  if (i < 0 || i >= ncol())
    throw std::out_of_range("column position " + std::to_string(i) + " out of range");
  return columns_[static_cast<size_t>(i)];
}

const Column& Frame::column(const std::string& name) const {
  std::int64_t i = position(name);
  if (i < 0) throw std::invalid_argument("unknown column " + name);
  return columns_[static_cast<size_t>(i)];
}

Column& Frame::column_mut(std::int64_t i) {
  if (i < 0 || i >= ncol())
    throw std::out_of_range("column position " + std::to_string(i) + " out of range");
  return columns_[static_cast<size_t>(i)];
}

bool Frame::has(const std::string& name) const { return position(name) >= 0; }

std::int64_t Frame::position(const std::string& name) const {
  for (size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name() == name) return static_cast<std::int64_t>(i);
  }
  return -1;
}

std::vector<std::string> Frame::names() const {
  std::vector<std::string> out;
  out.reserve(columns_.size());
  for (const auto& c : columns_) out.push_back(c.name());
  return out;
}

void Frame::add(Column col) {
  if (col.name().empty()) throw std::invalid_argument("column names must be non-empty");
  if (has(col.name())) throw std::invalid_argument("duplicate column name " + col.name());
  if (columns_.empty()) {
    nrow_ = col.size();
  } else if (col.size() != nrow_) {
    throw std::invalid_argument("column " + col.name() + " has " + std::to_string(col.size()) +
                                " rows, frame has " + std::to_string(nrow_));
  }
  columns_.push_back(std::move(col));
}

Frame Frame::take(const std::vector<std::int64_t>& idx) const {
  std::vector<Column> out;
  out.reserve(columns_.size());
  for (const auto& c : columns_) out.push_back(c.take(idx));
  Frame f(std::move(out));
  if (columns_.empty()) f.nrow_ = static_cast<std::int64_t>(idx.size());
  return f;
}

Frame Frame::take_opt(const std::vector<std::int64_t>& idx) const {
  std::vector<Column> out;
  out.reserve(columns_.size());
  for (const auto& c : columns_) out.push_back(c.take_opt(idx));
  Frame f(std::move(out));
  if (columns_.empty()) f.nrow_ = static_cast<std::int64_t>(idx.size());
  return f;
}

Frame select(const Frame& frame, const std::vector<std::string>& names) {
  std::vector<Column> out;
  out.reserve(names.size());
  for (const auto& name : names) out.push_back(frame.column(name));
  return Frame(std::move(out));
}

Frame select(const Frame& frame, const std::vector<std::int64_t>& positions) {
  std::vector<Column> out;
  out.reserve(positions.size());
  for (auto p : positions) out.push_back(frame.column(p));
  return Frame(std::move(out));
}

Frame filter_rows(const Frame& frame, const std::vector<std::uint8_t>& keep) {
  if (static_cast<std::int64_t>(keep.size()) != frame.nrow())
    throw std::invalid_argument("filter_rows: mask length " + std::to_string(keep.size()) +
                                " does not match " + std::to_string(frame.nrow()) + " rows");
  std::vector<std::int64_t> idx;
  for (std::int64_t i = 0; i < frame.nrow(); ++i) {
    if (keep[static_cast<size_t>(i)]) idx.push_back(i);
  }
  return frame.take(idx);
}

Frame filter_rows(const Frame& frame, const std::vector<std::int64_t>& indices) {
  for (auto i : indices) {
    if (i < 0 || i >= frame.nrow())
      throw std::out_of_range("filter_rows: row index " + std::to_string(i) + " out of range");
  }
  return frame.take(indices);
}

Frame add_vars(const Frame& frame, const Frame& extra) {
  if (!extra.empty() && !frame.empty() && extra.nrow() != frame.nrow())
    throw std::invalid_argument("add_vars: row counts differ (" + std::to_string(frame.nrow()) +
                                " vs " + std::to_string(extra.nrow()) + ")");
  Frame out = frame;
  for (const auto& c : extra.columns()) out.add(c);
  return out;
}

std::int64_t n_distinct_values(const Column& col) {
  std::unordered_set<std::string> seen;
  std::int64_t n = 0;
  // String-keyed distinct count; exact for all kinds since value_to_string is
  // injective per kind on non-missing values.
  for (std::int64_t i = 0; i < col.size(); ++i) {
    if (!col.is_valid(i)) continue;
    if (seen.insert(value_to_string(col.value_at(i))).second) ++n;
  }
  return n;
}

Frame namlab(const Frame& frame, bool with_stats) {
  std::vector<std::string> vars, classes;
  std::vector<std::optional<std::string>> labels;
  std::vector<std::int64_t> n, ndist;
  for (const auto& c : frame.columns()) {
    vars.push_back(c.name());
    classes.push_back(class_name(c.kind()));
    labels.push_back(c.label());
    if (with_stats) {
      n.push_back(c.valid_count());
      ndist.push_back(n_distinct_values(c));
    }
  }
  std::vector<Column> cols;
  cols.push_back(Column::text("Variable", std::move(vars)));
  cols.push_back(Column::text("Class", std::move(classes)));
  if (with_stats) {
    cols.push_back(Column::i64("N", std::move(n)));
    cols.push_back(Column::i64("Ndist", std::move(ndist)));
  }
  cols.push_back(Column::text("Label", labels));
  return Frame(std::move(cols));
}

}  // namespace foldframe
