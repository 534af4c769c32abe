#pragma once

#include <optional>
#include <string>
#include <vector>

#include "foldframe/frame.hpp"
#include "foldframe/grouping.hpp"

namespace foldframe {

// Integer time ids: raw times divided by the greatest common divisor of their
// deltas and shifted so the smallest id is 1.
struct TimeId {
  Column ids;  // int64, one per row; missing where the raw time is missing
  double gcd = 1.0;
  double origin = 0.0;        // minimum raw value
  std::int64_t n_periods = 0; // distinct observed periods
  std::int64_t span = 0;      // (max - min) / gcd + 1
  bool approx = false;        // deltas were not commensurable; gcd fell back to the smallest delta
  std::string source_name;
};

TimeId time_id(const Column& t);

// Panel index: an interacted group factor over the id columns plus integer
// time ids. (group, time) pairs are unique.
struct PanelIndex {
  bool has_groups = false;
  Grouping groups;         // valid when has_groups
  std::string group_name;  // id column names joined with "."
  TimeId time;
  std::string time_name;
  std::int64_t nrow = 0;

  std::int64_t n_ids() const { return has_groups ? groups.n_groups() : 1; }
  // "[N. ids] | [N. periods (total periods)]", e.g. "c.s [100] | y [8 (10)]".
  std::string summary() const;
};

PanelIndex make_index(const Frame& frame, const std::vector<std::string>& id_cols,
                      const std::string& time_col, std::optional<bool> sort = std::nullopt);

struct IndexedSeries {
  Column values;
  PanelIndex index;
};

struct IndexedFrame {
  Frame data;
  PanelIndex index;

  IndexedSeries series(const std::string& column) const {
    return IndexedSeries{data.column(column), index};
  }
};

IndexedFrame index_by(const Frame& frame, const std::vector<std::string>& id_cols,
                      const std::string& time_col, std::optional<bool> sort = std::nullopt);

// Value observed n time steps earlier in the same group (negative n looks
// ahead); rows whose partner period is absent yield fill (default missing).
// Without a time id the rows of each group must be contiguous.
Column shift(const Column& x, std::int64_t n, const Grouping* g = nullptr,
             const TimeId* t = nullptr, const Value& fill = std::monostate{});
// One output column per requested step, named F{k}/L{k}; n=0 keeps the
// original column and name.
Frame shift(const Column& x, const std::vector<std::int64_t>& ns, const Grouping* g = nullptr,
            const TimeId* t = nullptr, const Value& fill = std::monostate{});

Column diff(const Column& x, std::int64_t n = 1, const Grouping* g = nullptr,
            const TimeId* t = nullptr, bool log = false);
Frame diff(const Column& x, const std::vector<std::int64_t>& ns, const Grouping* g = nullptr,
           const TimeId* t = nullptr, bool log = false);

Column growth(const Column& x, std::int64_t n = 1, const Grouping* g = nullptr,
              const TimeId* t = nullptr, double power = 1.0, double scale = 100.0);
Frame growth(const Column& x, const std::vector<std::int64_t>& ns, const Grouping* g = nullptr,
             const TimeId* t = nullptr, double power = 1.0, double scale = 100.0);

// Running within-group sum in ord-order (default row order); missing values
// contribute nothing and stay missing in place.
Column cumsum_by(const Column& x, const Grouping* g = nullptr,
                 const std::vector<std::int64_t>* ord = nullptr);

// Groups x full-period-span table: one row per group (leading label column),
// one column per period labeled with the raw time value.
Frame panel_matrix(const IndexedSeries& series);

// True when some group's observed periods skip a value inside its own range.
bool is_irregular(const PanelIndex& index);
inline bool is_irregular(const IndexedSeries& s) { return is_irregular(s.index); }
inline bool is_irregular(const IndexedFrame& f) { return is_irregular(f.index); }

}  // namespace foldframe
