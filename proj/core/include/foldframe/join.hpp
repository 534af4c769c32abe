#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "foldframe/frame.hpp"

namespace foldframe {

// First-match lookup of x key tuples in y.
struct MatchResult {
  std::vector<std::int64_t> positions;  // per x row, first matching y row or -1
  std::int64_t n_nomatch = 0;
  std::int64_t n_groups = 0;    // referencable target rows (nrow of y)
  std::int64_t n_distinct = 0;  // distinct matched target rows
  bool overidentified = false;  // a key prefix already determined all matches
  int keys_needed = 0;          // smallest such prefix length (>= 2)
};

// Matches each x key tuple against y, returning first matches. With three or
// more keys the first two are hashed jointly and further keys refine the
// match; overid_check reports when the extra keys never refined anything.
MatchResult match_first(const Frame& x_keys, const Frame& y_keys, bool overid_check = true);

enum class JoinHow { left, right, inner, full, semi, anti };
enum class JoinValidate { m_m, one_m, m_one, one_one };
enum class DropDupCols { none, x, y };

const char* join_how_name(JoinHow how);
std::optional<JoinHow> join_how_from_name(const std::string& name);
const char* join_validate_name(JoinValidate v);
std::optional<JoinValidate> join_validate_from_name(const std::string& name);

struct JoinSpec {
  // Key pairs (x column, y column); empty resolves to the shared column names.
  std::vector<std::pair<std::string, std::string>> on;
  JoinHow how = JoinHow::left;
  bool multiple = false;  // false: only first matches are taken
  bool sort = false;      // true: output sorted by the keys
  std::optional<std::string> suffix;  // default: "_" + other table's name
  JoinValidate validate = JoinValidate::m_m;
  std::optional<double> require_x;  // minimum x match proportion in [0, 1]
  std::optional<double> require_y;
  std::optional<std::string> match_column;  // adds a match-origin column (".join")
  DropDupCols drop_dup_cols = DropDupCols::none;
  std::optional<int> verbose;  // default: engine verbose option
  std::string x_name = "x";
  std::string y_name = "y";
};

struct JoinReport {
  JoinHow how = JoinHow::left;
  std::vector<std::string> x_keys;
  std::vector<std::string> y_keys;
  std::int64_t x_matched = 0, x_rows = 0;
  std::int64_t y_matched = 0, y_rows = 0;
  double x_pct = 0.0, y_pct = 0.0;
  std::string relationship;  // key uniqueness classes, e.g. "1:m"
  std::vector<std::string> duplicate_column_actions;
  MatchResult match;
  std::string header;  // the one-line join summary
};

struct JoinResult {
  Frame frame;
  JoinReport report;
};

// Verbose events (join summary, duplicate-column actions, warnings) are
// written one line at a time to the caller-supplied sink.
using VerboseSink = std::function<void(const std::string&)>;

JoinResult join(const Frame& x, const Frame& y, const JoinSpec& spec = {},
                const VerboseSink& sink = {});

}  // namespace foldframe
