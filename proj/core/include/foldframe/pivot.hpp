#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "foldframe/frame.hpp"
#include "foldframe/stats.hpp"

namespace foldframe {

enum class PivotMode { longer, wider, recast };

// Cell aggregators applied in one pass during placement. Statistical
// aggregators (Stat) run as a grouped reduction before placement instead.
enum class PivotAgg { first, last, sum, mean, min, max, count };

std::optional<PivotAgg> pivot_agg_from_name(const std::string& name);

struct PivotSpec {
  PivotMode mode = PivotMode::longer;
  std::vector<std::string> ids;     // empty: complement of the other roles
  std::vector<std::string> values;  // empty: complement of the other roles

  // longer: output column names
  std::string variable_name = "variable";
  std::string value_name = "value";
  std::optional<std::string> label_name;  // adds a source-label column when set

  // wider: source columns for new names / labels
  std::vector<std::string> names_cols;
  std::vector<std::string> label_cols;

  // recast: source and destination of names / labels
  std::string names_from;
  std::string names_to = "variable";
  std::optional<std::string> labels_from;
  std::optional<std::string> labels_to;

  bool na_rm = false;
  bool check_dups = false;
  std::variant<PivotAgg, Stat> agg = PivotAgg::last;
  std::optional<Value> fill;  // value for absent cells (wider/recast)
  bool sort = false;          // sort id rows and name levels instead of appearance order
};

Frame pivot(const Frame& frame, const PivotSpec& spec);

}  // namespace foldframe
