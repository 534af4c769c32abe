#include <algorithm>
#include <stdexcept>

#include "foldframe/stats.hpp"

namespace foldframe {

Frame aggregate(const Frame& frame, const std::vector<std::string>& by,
                const std::optional<std::string>& w, const AggregateSpec& spec) {
  if (by.empty()) throw std::invalid_argument("aggregate: no key columns supplied");
  Frame keys = select(frame, by);
  const Column* wcol = nullptr;
  if (w) {
    wcol = &frame.column(*w);
    if (!wcol->is_numeric())
      throw std::invalid_argument("aggregate: weight column " + *w + " must be numeric");
  }

  Grouping g = group_by(keys, spec.sort, true);

  Frame out = *g.groups();
  if (wcol && spec.keep_w) {
    Column wsum = reduce(Stat::sum, *wcol, &g, nullptr, spec.stat_opts);
    wsum.rename("sum." + *w);
    out.add(std::move(wsum));
  }

  auto is_key = [&](const std::string& name) {
    return std::find(by.begin(), by.end(), name) != by.end();
  };
  for (const auto& col : frame.columns()) {
    if (is_key(col.name()) || (w && col.name() == *w)) continue;
    Stat stat = col.is_numeric() ? spec.numeric_stat : spec.cat_stat;
    out.add(reduce(stat, col, &g, wcol, spec.stat_opts));
  }
  return out;
}

}  // namespace foldframe
