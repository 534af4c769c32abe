#pragma once

#include <optional>
#include <string>
#include <vector>

#include "foldframe/frame.hpp"
#include "foldframe/grouping.hpp"
#include "foldframe/stats.hpp"

namespace foldframe {

// Panel-decomposed summary: Overall stats on the raw data, Between stats on
// the per-group means, Within stats on x - group mean + overall mean. Without
// pid only the Overall row is produced. Row layout (one row per variable,
// by-group, and scope): Variable, [Group,] Scope, N, [WeightSum,] Mean, SD,
// Min, Max. Within rows report N/T = N / groups.
Frame panel_summary(const Column& x, const Grouping* pid = nullptr,
                    const Grouping* by = nullptr, const Column* w = nullptr);
Frame panel_summary(const Frame& frame, const Grouping* pid = nullptr,
                    const Grouping* by = nullptr, const Column* w = nullptr);

// Detailed description. Numeric variables: counts, moments, Skew/Kurt and
// quantiles at {1,5,10,25,50,75,90,95,99}%. Categorical variables: level
// tables with (weighted) counts and percents sorted descending. Missing
// weights are replaced by 0 before use.
struct VariableDescription {
  std::string name;
  std::string klass;
  std::optional<std::string> label;
  bool numeric = false;
  Frame stats;
};

struct Description {
  std::int64_t n_rows = 0;
  double weight_sum = 0.0;
  std::vector<VariableDescription> variables;
};

Description describe(const Frame& frame, const Grouping* by = nullptr,
                     const Column* w = nullptr);

// Cross-tabulation of 1..k discrete columns; with more than two columns the
// leading columns interact into the row dimension (labels joined with ".").
enum class CrossTabKind { count, weight_sum, statistic };

struct CrossTab {
  CrossTabKind kind = CrossTabKind::count;
  std::string row_name;
  std::string col_name;
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  // row-major cells
  std::vector<std::int64_t> counts;
  std::vector<double> values;
  std::vector<std::uint8_t> valid;

  std::int64_t n_rows() const { return static_cast<std::int64_t>(row_labels.size()); }
  std::int64_t n_cols() const { return static_cast<std::int64_t>(col_labels.size()); }
  Frame to_frame() const;
};

// no w: counts; w alone: per-cell weight sums; cell_stat: the statistic of w
// within each cell, optionally weighted by stat_weights.
CrossTab cross_tab(const std::vector<Column>& cols, const Column* w = nullptr,
                   std::optional<Stat> cell_stat = std::nullopt,
                   const Column* stat_weights = nullptr,
                   std::optional<bool> sort = std::nullopt);

// Per column: does any group contain two or more distinct non-missing values?
Frame varying(const Frame& frame, const Grouping& by);

enum class PairwiseKind { cor, cov, nobs };

// Pairwise-complete (optionally weighted) correlation / covariance /
// observation-count matrix as a square frame with a leading Variable column.
Frame pairwise(PairwiseKind kind, const Frame& frame, const Column* w = nullptr);

}  // namespace foldframe
