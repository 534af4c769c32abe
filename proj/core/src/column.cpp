#include "foldframe/column.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace foldframe {

const char* kind_name(ValueKind k) {
  switch (k) {
    case ValueKind::float64: return "float64";
    case ValueKind::int64: return "int64";
    case ValueKind::text: return "text";
    case ValueKind::boolean: return "bool";
    case ValueKind::categorical: return "categorical";
  }
  return "?";
}

const char* class_name(ValueKind k) {
  switch (k) {
    case ValueKind::float64: return "numeric";
    case ValueKind::int64: return "integer";
    case ValueKind::text: return "character";
    case ValueKind::boolean: return "logical";
    case ValueKind::categorical: return "factor";
  }
  return "?";
}

bool value_missing(const Value& v) {
  return std::holds_alternative<std::monostate>(v);
}

bool value_equal(const Value& a, const Value& b) {
  if (value_missing(a) || value_missing(b)) return value_missing(a) && value_missing(b);
  // Numeric alternatives compare by value across double/int64/bool.
  auto as_num = [](const Value& v, double& out) {
    if (std::holds_alternative<double>(v)) { out = std::get<double>(v); return true; }
    if (std::holds_alternative<std::int64_t>(v)) {
      out = static_cast<double>(std::get<std::int64_t>(v));
      return true;
    }
    if (std::holds_alternative<bool>(v)) { out = std::get<bool>(v) ? 1.0 : 0.0; return true; }
    return false;
  };
  double x, y;
  if (as_num(a, x) && as_num(b, y)) return x == y;
  if (std::holds_alternative<std::string>(a) && std::holds_alternative<std::string>(b))
    return std::get<std::string>(a) == std::get<std::string>(b);
  return false;
}

std::string value_to_string(const Value& v) {
  if (value_missing(v)) return "";
  if (std::holds_alternative<std::string>(v)) return std::get<std::string>(v);
  if (std::holds_alternative<bool>(v)) return std::get<bool>(v) ? "true" : "false";
  if (std::holds_alternative<std::int64_t>(v)) return std::to_string(std::get<std::int64_t>(v));
  double d = std::get<double>(v);
  if (d == 0.0) d = 0.0;  // collapse -0 into 0
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), d);
  return std::string(buf, res.ptr);
}

void Column::check_lengths() const {
  size_t n = valid_.size();
  size_t m = std::visit(
      [](const auto& v) -> size_t {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Categorical>) {
          return v.codes.size();
        } else {
          return v.size();
        }
      },
      data_);
  if (n != m) throw std::invalid_argument("column " + name_ + ": values and mask length differ");
  if (kind_ == ValueKind::categorical) {
    const auto& c = std::get<Categorical>(data_);
    for (size_t i = 0; i < c.codes.size(); ++i) {
      if (valid_[i] &&
          (c.codes[i] < 0 || c.codes[i] >= static_cast<std::int32_t>(c.levels.size()))) {
        throw std::invalid_argument("column " + name_ + ": categorical code out of range");
      }
    }
  }
}

void Column::normalize_nan() {
  if (kind_ != ValueKind::float64) return;
  auto& v = std::get<std::vector<double>>(data_);
  for (size_t i = 0; i < v.size(); ++i) {
    if (std::isnan(v[i])) {
      valid_[i] = 0;
      v[i] = 0.0;
    }
  }
}

namespace {
std::vector<std::uint8_t> all_valid(size_t n) { return std::vector<std::uint8_t>(n, 1); }
}  // namespace

Column Column::f64(std::string name, std::vector<double> values) {
  auto mask = all_valid(values.size());
  return f64(std::move(name), std::move(values), std::move(mask));
}

Column Column::f64(std::string name, std::vector<double> values,
                   std::vector<std::uint8_t> valid) {
  Column c;
  c.name_ = std::move(name);
  c.kind_ = ValueKind::float64;
  c.valid_ = std::move(valid);
  c.data_ = std::move(values);
  c.check_lengths();
  c.normalize_nan();
  return c;
}

Column Column::f64(std::string name, const std::vector<std::optional<double>>& values) {
  std::vector<double> v(values.size(), 0.0);
  std::vector<std::uint8_t> m(values.size(), 0);
  for (size_t i = 0; i < values.size(); ++i) {
    if (values[i]) { v[i] = *values[i]; m[i] = 1; }
  }
  return f64(std::move(name), std::move(v), std::move(m));
}

Column Column::i64(std::string name, std::vector<std::int64_t> values) {
  auto mask = all_valid(values.size());
  return i64(std::move(name), std::move(values), std::move(mask));
}

Column Column::i64(std::string name, std::vector<std::int64_t> values,
                   std::vector<std::uint8_t> valid) {
  Column c;
  c.name_ = std::move(name);
  c.kind_ = ValueKind::int64;
  c.valid_ = std::move(valid);
  c.data_ = std::move(values);
  c.check_lengths();
  return c;
}

Column Column::i64(std::string name, const std::vector<std::optional<std::int64_t>>& values) {
  std::vector<std::int64_t> v(values.size(), 0);
  std::vector<std::uint8_t> m(values.size(), 0);
  for (size_t i = 0; i < values.size(); ++i) {
    if (values[i]) { v[i] = *values[i]; m[i] = 1; }
  }
  return i64(std::move(name), std::move(v), std::move(m));
}

Column Column::text(std::string name, std::vector<std::string> values) {
  auto mask = all_valid(values.size());
  return text(std::move(name), std::move(values), std::move(mask));
}

Column Column::text(std::string name, std::vector<std::string> values,
                    std::vector<std::uint8_t> valid) {
  Column c;
  c.name_ = std::move(name);
  c.kind_ = ValueKind::text;
  c.valid_ = std::move(valid);
  c.data_ = std::move(values);
  c.check_lengths();
  return c;
}

Column Column::text(std::string name, const std::vector<std::optional<std::string>>& values) {
  std::vector<std::string> v(values.size());
  std::vector<std::uint8_t> m(values.size(), 0);
  for (size_t i = 0; i < values.size(); ++i) {
    if (values[i]) { v[i] = *values[i]; m[i] = 1; }
  }
  return text(std::move(name), std::move(v), std::move(m));
}

Column Column::boolean(std::string name, std::vector<std::uint8_t> values) {
  auto mask = all_valid(values.size());
  return boolean(std::move(name), std::move(values), std::move(mask));
}

Column Column::boolean(std::string name, std::vector<std::uint8_t> values,
                       std::vector<std::uint8_t> valid) {
  Column c;
  c.name_ = std::move(name);
  c.kind_ = ValueKind::boolean;
  c.valid_ = std::move(valid);
  for (auto& b : values) b = b ? 1 : 0;
  c.data_ = std::move(values);
  c.check_lengths();
  return c;
}

Column Column::categorical(std::string name, std::vector<std::int32_t> codes,
                           std::vector<std::string> levels) {
  auto mask = all_valid(codes.size());
  return categorical(std::move(name), std::move(codes), std::move(levels), std::move(mask));
}

Column Column::categorical(std::string name, std::vector<std::int32_t> codes,
                           std::vector<std::string> levels,
                           std::vector<std::uint8_t> valid) {
  Column c;
  c.name_ = std::move(name);
  c.kind_ = ValueKind::categorical;
  c.valid_ = std::move(valid);
  c.data_ = Categorical{std::move(codes), std::move(levels)};
  c.check_lengths();
  return c;
}

Column Column::categorical_from_text(std::string name,
                                     const std::vector<std::optional<std::string>>& values) {
  std::vector<std::int32_t> codes(values.size(), 0);
  std::vector<std::uint8_t> mask(values.size(), 0);
  std::vector<std::string> levels;
  std::unordered_map<std::string, std::int32_t> seen;
  for (size_t i = 0; i < values.size(); ++i) {
    if (!values[i]) continue;
    auto it = seen.find(*values[i]);
    if (it == seen.end()) {
      it = seen.emplace(*values[i], static_cast<std::int32_t>(levels.size())).first;
      levels.push_back(*values[i]);
    }
    codes[i] = it->second;
    mask[i] = 1;
  }
  return categorical(std::move(name), std::move(codes), std::move(levels), std::move(mask));
}

Column Column::missing_of(std::string name, ValueKind kind, std::int64_t n) {
  size_t m = static_cast<size_t>(n);
  std::vector<std::uint8_t> mask(m, 0);
  switch (kind) {
    case ValueKind::float64: return f64(std::move(name), std::vector<double>(m, 0.0), std::move(mask));
    case ValueKind::int64: return i64(std::move(name), std::vector<std::int64_t>(m, 0), std::move(mask));
    case ValueKind::text: return text(std::move(name), std::vector<std::string>(m), std::move(mask));
    case ValueKind::boolean: return boolean(std::move(name), std::vector<std::uint8_t>(m, 0), std::move(mask));
    case ValueKind::categorical:
      return categorical(std::move(name), std::vector<std::int32_t>(m, 0), {}, std::move(mask));
  }
  throw std::logic_error("missing_of: bad kind");
}

std::int64_t Column::valid_count() const {
  std::int64_t n = 0;
  for (auto v : valid_) n += v;
  return n;
}

const std::vector<double>& Column::f64_data() const {
  if (kind_ != ValueKind::float64)
    throw std::logic_error("column " + name_ + " is not float64");
  return std::get<std::vector<double>>(data_);
}

const std::vector<std::int64_t>& Column::i64_data() const {
  if (kind_ != ValueKind::int64) throw std::logic_error("column " + name_ + " is not int64");
  return std::get<std::vector<std::int64_t>>(data_);
}

const std::vector<std::string>& Column::text_data() const {
  if (kind_ != ValueKind::text) throw std::logic_error("column " + name_ + " is not text");
  return std::get<std::vector<std::string>>(data_);
}

const std::vector<std::uint8_t>& Column::bool_data() const {
  if (kind_ != ValueKind::boolean) throw std::logic_error("column " + name_ + " is not bool");
  return std::get<std::vector<std::uint8_t>>(data_);
}

const Column::Categorical& Column::cat() const {
  if (kind_ != ValueKind::categorical)
    throw std::logic_error("column " + name_ + " is not categorical");
  return std::get<Categorical>(data_);
}

Value Column::value_at(std::int64_t i) const {
  size_t idx = static_cast<size_t>(i);
  if (!valid_[idx]) return std::monostate{};
  switch (kind_) {
    case ValueKind::float64: return std::get<std::vector<double>>(data_)[idx];
    case ValueKind::int64: return std::get<std::vector<std::int64_t>>(data_)[idx];
    case ValueKind::text: return std::get<std::vector<std::string>>(data_)[idx];
    case ValueKind::boolean: return std::get<std::vector<std::uint8_t>>(data_)[idx] != 0;
    case ValueKind::categorical: {
      const auto& c = std::get<Categorical>(data_);
      return c.levels[static_cast<size_t>(c.codes[idx])];
    }
  }
  return std::monostate{};
}

double Column::number_at(std::int64_t i) const {
  size_t idx = static_cast<size_t>(i);
  if (!valid_[idx]) return std::numeric_limits<double>::quiet_NaN();
  switch (kind_) {
    case ValueKind::float64: return std::get<std::vector<double>>(data_)[idx];
    case ValueKind::int64:
      return static_cast<double>(std::get<std::vector<std::int64_t>>(data_)[idx]);
    case ValueKind::boolean:
      return std::get<std::vector<std::uint8_t>>(data_)[idx] ? 1.0 : 0.0;
    default:
      throw std::invalid_argument("column " + name_ + " is not numeric");
  }
}

std::vector<double> Column::to_f64() const {
  if (!is_numeric()) throw std::invalid_argument("column " + name_ + " is not numeric");
  std::vector<double> out(valid_.size());
  for (std::int64_t i = 0; i < size(); ++i) out[static_cast<size_t>(i)] = number_at(i);
  return out;
}

namespace {

template <typename T>
std::vector<T> gather(const std::vector<T>& src, const std::vector<std::int64_t>& idx,
                      bool allow_absent) {
  std::vector<T> out;
  out.reserve(idx.size());
  for (auto i : idx) {
    if (i < 0) {
      if (!allow_absent) throw std::out_of_range("take: negative index");
      out.push_back(T{});
    } else {
      out.push_back(src[static_cast<size_t>(i)]);
    }
  }
  return out;
}

}  // namespace

Column Column::take(const std::vector<std::int64_t>& idx) const {
  for (auto i : idx) {
    if (i < 0 || i >= size())
      throw std::out_of_range("take: row index " + std::to_string(i) + " out of range");
  }
  return take_opt(idx);
}

Column Column::take_opt(const std::vector<std::int64_t>& idx) const {
  for (auto i : idx) {
    if (i >= size())
      throw std::out_of_range("take: row index " + std::to_string(i) + " out of range");
  }
  Column out;
  out.name_ = name_;
  out.kind_ = kind_;
  out.label_ = label_;
  std::vector<std::uint8_t> mask;
  mask.reserve(idx.size());
  for (auto i : idx) mask.push_back(i >= 0 && valid_[static_cast<size_t>(i)] ? 1 : 0);
  out.valid_ = std::move(mask);
  switch (kind_) {
    case ValueKind::float64:
      out.data_ = gather(std::get<std::vector<double>>(data_), idx, true);
      break;
    case ValueKind::int64:
      out.data_ = gather(std::get<std::vector<std::int64_t>>(data_), idx, true);
      break;
    case ValueKind::text:
      out.data_ = gather(std::get<std::vector<std::string>>(data_), idx, true);
      break;
    case ValueKind::boolean:
      out.data_ = gather(std::get<std::vector<std::uint8_t>>(data_), idx, true);
      break;
    case ValueKind::categorical: {
      const auto& c = std::get<Categorical>(data_);
      Categorical nc;
      nc.levels = c.levels;
      nc.codes = gather(c.codes, idx, true);
      out.data_ = std::move(nc);
      break;
    }
  }
  return out;
}

Column Column::filter(const std::vector<std::uint8_t>& mask) const {
  if (static_cast<std::int64_t>(mask.size()) != size())
    throw std::invalid_argument("filter: mask length " + std::to_string(mask.size()) +
                                " does not match " + std::to_string(size()) + " rows");
  std::vector<std::int64_t> idx;
  for (std::int64_t i = 0; i < size(); ++i) {
    if (mask[static_cast<size_t>(i)]) idx.push_back(i);
  }
  return take_opt(idx);
}

bool Column::equal_values(const Column& other) const {
  if (kind_ != other.kind_ || size() != other.size()) return false;
  for (std::int64_t i = 0; i < size(); ++i) {
    if (is_valid(i) != other.is_valid(i)) return false;
    if (is_valid(i) && !value_equal(value_at(i), other.value_at(i))) return false;
  }
  return true;
}

}  // namespace foldframe
