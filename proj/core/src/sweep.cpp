#include <cmath>
#include <limits>
#include <stdexcept>

#include "foldframe/stats.hpp"
#include "value_assembly.hpp"

namespace foldframe {

namespace {

// R-style modulus: remainder carries the sign of the divisor.
double floor_mod(double x, double s) { return x - std::floor(x / s) * s; }

bool same_levels(const Column& a, const Column& b) {
  return a.kind() == ValueKind::categorical && b.kind() == ValueKind::categorical &&
         a.cat().levels == b.cat().levels;
}

}  // namespace

Column sweep(const Column& x, const Column& stats, SweepOp op, const Grouping* g) {
  std::int64_t n = x.size();
  std::int64_t K = g ? g->n_groups() : 1;
  if (g && g->nrow() != n)
    throw std::invalid_argument("grouping covers " + std::to_string(g->nrow()) +
                                " rows, column " + x.name() + " has " + std::to_string(n));
  if (stats.size() != K)
    throw std::invalid_argument("sweep: statistic column has " + std::to_string(stats.size()) +
                                " entries, expected " + std::to_string(K));

  auto gid_at = [&](std::int64_t i) -> std::int64_t {
    return g ? g->group_id()[static_cast<size_t>(i)] : 0;
  };

  bool replace_mode = op == SweepOp::replace_na || op == SweepOp::replace_fill ||
                      op == SweepOp::replace;
  if (replace_mode) {
    if (op == SweepOp::replace_fill || op == SweepOp::replace) {
      std::vector<std::int64_t> idx(static_cast<size_t>(n));
      for (std::int64_t i = 0; i < n; ++i) {
        bool keep_missing = op == SweepOp::replace && !x.is_valid(i);
        idx[static_cast<size_t>(i)] = keep_missing ? -1 : gid_at(i);
      }
      Column out = stats.take_opt(idx);
      out.rename(x.name());
      out.set_label(x.label());
      return out;
    }
    // replace_na: fill missing x entries from the group statistic
    if (x.kind() == stats.kind() &&
        (x.kind() != ValueKind::categorical || same_levels(x, stats))) {
      if (x.kind() == ValueKind::categorical) {
        std::vector<std::int32_t> codes(static_cast<size_t>(n), 0);
        std::vector<std::uint8_t> mask(static_cast<size_t>(n), 0);
        for (std::int64_t i = 0; i < n; ++i) {
          size_t ii = static_cast<size_t>(i);
          if (x.is_valid(i)) {
            codes[ii] = x.cat().codes[ii];
            mask[ii] = 1;
          } else if (stats.is_valid(gid_at(i))) {
            codes[ii] = stats.cat().codes[static_cast<size_t>(gid_at(i))];
            mask[ii] = 1;
          }
        }
        Column out = Column::categorical(x.name(), std::move(codes), x.cat().levels,
                                         std::move(mask));
        out.set_label(x.label());
        return out;
      }
    }
    ValueKind kind = detail::promote_kinds(x.kind(), stats.kind());
    std::vector<Value> vals(static_cast<size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
      vals[static_cast<size_t>(i)] = x.is_valid(i) ? x.value_at(i) : stats.value_at(gid_at(i));
    }
    Column out = detail::assemble_values(x.name(), kind, vals);
    out.set_label(x.label());
    return out;
  }

  // arithmetic modes
  if (!x.is_numeric())
    throw std::invalid_argument("sweep mode " + std::string(sweep_name(op)) +
                                " requires numeric data, " + x.name() + " is " +
                                kind_name(x.kind()));
  if (!stats.is_numeric())
    throw std::invalid_argument("sweep statistics must be numeric for mode " +
                                std::string(sweep_name(op)));

  std::vector<double> xd = x.to_f64();
  std::vector<double> sd = stats.to_f64();

  double overall = 0.0;
  if (op == SweepOp::subtract_add_avg) {
    // size-weighted average of the group statistics
    double num = 0.0, den = 0.0;
    for (std::int64_t k = 0; k < K; ++k) {
      if (!stats.is_valid(k)) continue;
      double ng = g ? static_cast<double>(g->group_sizes()[static_cast<size_t>(k)])
                    : static_cast<double>(n);
      num += ng * sd[static_cast<size_t>(k)];
      den += ng;
    }
    overall = den > 0.0 ? num / den : std::numeric_limits<double>::quiet_NaN();
  }

  bool int_result = (x.kind() == ValueKind::int64 || x.kind() == ValueKind::boolean) &&
                    (stats.kind() == ValueKind::int64 || stats.kind() == ValueKind::boolean) &&
                    (op == SweepOp::subtract || op == SweepOp::add || op == SweepOp::multiply ||
                     op == SweepOp::modulus || op == SweepOp::subtract_modulus);

  std::vector<double> out(static_cast<size_t>(n), 0.0);
  std::vector<std::uint8_t> mask(static_cast<size_t>(n), 0);
  for (std::int64_t i = 0; i < n; ++i) {
    size_t ii = static_cast<size_t>(i);
    std::int64_t k = gid_at(i);
    if (!x.is_valid(i) || !stats.is_valid(k)) continue;
    double xi = xd[ii];
    double s = sd[static_cast<size_t>(k)];
    double res;
    switch (op) {
      case SweepOp::subtract: res = xi - s; break;
      case SweepOp::subtract_add_avg: res = xi - s + overall; break;
      case SweepOp::divide: res = xi / s; break;
      case SweepOp::percent: res = 100.0 * xi / s; break;
      case SweepOp::add: res = xi + s; break;
      case SweepOp::multiply: res = xi * s; break;
      case SweepOp::modulus: res = floor_mod(xi, s); break;
      case SweepOp::subtract_modulus: res = xi - floor_mod(xi, s); break;
      default: throw std::logic_error("sweep: unhandled mode");
    }
    if (std::isnan(res)) continue;
    out[ii] = res;
    mask[ii] = 1;
  }

  Column result;
  if (int_result) {
    std::vector<std::int64_t> iv(static_cast<size_t>(n), 0);
    for (std::int64_t i = 0; i < n; ++i) {
      if (mask[static_cast<size_t>(i)])
        iv[static_cast<size_t>(i)] = std::llround(out[static_cast<size_t>(i)]);
    }
    result = Column::i64(x.name(), std::move(iv), std::move(mask));
  } else {
    result = Column::f64(x.name(), std::move(out), std::move(mask));
  }
  result.set_label(x.label());
  return result;
}

}  // namespace foldframe
