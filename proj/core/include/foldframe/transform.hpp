#pragma once

#include <functional>

#include "foldframe/frame.hpp"
#include "foldframe/grouping.hpp"
#include "foldframe/stats.hpp"

namespace foldframe {

// Standardizes within groups: (x - mean) / sd with weighted moments. Groups
// where sd is undefined (size <= 1 or zero variance) come back missing.
Column scale(const Column& x, const Grouping* g = nullptr, const Column* w = nullptr,
             const StatOptions& opts = {});

enum class AddBack { zero, overall_mean };

// Centers within groups; overall_mean adds the grand (weighted) mean back.
Column within(const Column& x, const Grouping* g = nullptr, const Column* w = nullptr,
              AddBack add_back = AddBack::zero, const StatOptions& opts = {});

// Replaces each row by its group's (weighted) mean. fill=false keeps missing
// rows missing; fill=true writes the group mean there too.
Column between(const Column& x, const Grouping* g = nullptr, const Column* w = nullptr,
               bool fill = false, const StatOptions& opts = {});

// Split-apply-combine with a caller-supplied per-group function. f receives
// each group's slice (rows in ascending order) and must return either one row
// per call (scalar results, combined in group order) or exactly the group's
// length (re-stitched to the original row order).
Column by_apply(const Column& x, const Grouping& g,
                const std::function<Column(const Column&)>& f);
Frame by_apply(const Frame& frame, const Grouping& g,
               const std::function<Column(const Column&)>& f);

// Applies f to every column (margin columns) or to every row vector of a
// numeric frame (margin rows; missing passed and returned as NaN).
Frame dapply_columns(const Frame& frame, const std::function<Column(const Column&)>& f);
Frame dapply_rows(const Frame& frame,
                  const std::function<std::vector<double>(const std::vector<double>&)>& f);

}  // namespace foldframe
