#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "foldframe/column.hpp"

namespace foldframe::detail {

inline ValueKind promote_kinds(ValueKind a, ValueKind b) {
  if (a == b && a != ValueKind::categorical) return a;
  auto numeric = [](ValueKind k) {
    return k == ValueKind::float64 || k == ValueKind::int64 || k == ValueKind::boolean;
  };
  auto textual = [](ValueKind k) {
    return k == ValueKind::text || k == ValueKind::categorical;
  };
  if (a == b) return ValueKind::text;  // categoricals stack as text
  if (numeric(a) && numeric(b)) {
    if (a == ValueKind::float64 || b == ValueKind::float64) return ValueKind::float64;
    return ValueKind::int64;
  }
  if (textual(a) && textual(b)) return ValueKind::text;
  throw std::invalid_argument(std::string("cannot combine ") + kind_name(a) + " and " +
                              kind_name(b) + " values");
}

inline Column assemble_values(const std::string& name, ValueKind kind,
                              const std::vector<Value>& vals) {
  size_t n = vals.size();
  std::vector<std::uint8_t> mask(n, 0);
  switch (kind) {
    case ValueKind::float64: {
      std::vector<double> v(n, 0.0);
      for (size_t i = 0; i < n; ++i) {
        if (value_missing(vals[i])) continue;
        mask[i] = 1;
        if (std::holds_alternative<double>(vals[i])) v[i] = std::get<double>(vals[i]);
        else if (std::holds_alternative<std::int64_t>(vals[i]))
          v[i] = static_cast<double>(std::get<std::int64_t>(vals[i]));
        else if (std::holds_alternative<bool>(vals[i])) v[i] = std::get<bool>(vals[i]) ? 1.0 : 0.0;
        else throw std::invalid_argument("cannot place a text value into numeric column " + name);
      }
      return Column::f64(name, std::move(v), std::move(mask));
    }
    case ValueKind::int64: {
      std::vector<std::int64_t> v(n, 0);
      for (size_t i = 0; i < n; ++i) {
        if (value_missing(vals[i])) continue;
        mask[i] = 1;
        if (std::holds_alternative<std::int64_t>(vals[i])) v[i] = std::get<std::int64_t>(vals[i]);
        else if (std::holds_alternative<bool>(vals[i])) v[i] = std::get<bool>(vals[i]) ? 1 : 0;
        else if (std::holds_alternative<double>(vals[i]))
          v[i] = static_cast<std::int64_t>(std::get<double>(vals[i]));
        else throw std::invalid_argument("cannot place a text value into integer column " + name);
      }
      return Column::i64(name, std::move(v), std::move(mask));
    }
    case ValueKind::boolean: {
      std::vector<std::uint8_t> v(n, 0);
      for (size_t i = 0; i < n; ++i) {
        if (value_missing(vals[i])) continue;
        mask[i] = 1;
        v[i] = std::get<bool>(vals[i]) ? 1 : 0;
      }
      return Column::boolean(name, std::move(v), std::move(mask));
    }
    default: {
      std::vector<std::string> v(n);
      for (size_t i = 0; i < n; ++i) {
        if (value_missing(vals[i])) continue;
        mask[i] = 1;
        v[i] = value_to_string(vals[i]);
      }
      return Column::text(name, std::move(v), std::move(mask));
    }
  }
}

// Converts a column to the target kind (identity allowed; categorical decodes
// to text).
inline Column cast_column(const Column& col, ValueKind kind) {
  if (col.kind() == kind) return col;
  std::vector<Value> vals(static_cast<size_t>(col.size()));
  for (std::int64_t i = 0; i < col.size(); ++i) vals[static_cast<size_t>(i)] = col.value_at(i);
  Column out = assemble_values(col.name(), kind, vals);
  out.set_label(col.label());
  return out;
}

}  // namespace foldframe::detail
