#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace foldframe {

enum class ValueKind { float64, int64, text, boolean, categorical };

const char* kind_name(ValueKind k);   // "float64", "int64", ...
const char* class_name(ValueKind k);  // "numeric", "integer", "character", "logical", "factor"

// A single cell. monostate = missing. Categorical cells decode to their
// level string.
using Value = std::variant<std::monostate, double, std::int64_t, std::string, bool>;

bool value_missing(const Value& v);
bool value_equal(const Value& a, const Value& b);  // missing == missing
std::string value_to_string(const Value& v);       // missing -> ""

// Typed value vector with a per-row validity mask and an optional variable
// label. Missing values are represented solely by the mask; a NaN supplied at
// construction is normalized to missing. Immutable in practice: operations
// return new columns.
class Column {
 public:
  struct Categorical {
    std::vector<std::int32_t> codes;  // index into levels; value ignored where invalid
    std::vector<std::string> levels;  // distinct, order-significant
  };

  Column() = default;

  static Column f64(std::string name, std::vector<double> values);
  static Column f64(std::string name, std::vector<double> values,
                    std::vector<std::uint8_t> valid);
  static Column f64(std::string name, const std::vector<std::optional<double>>& values);
  static Column i64(std::string name, std::vector<std::int64_t> values);
  static Column i64(std::string name, std::vector<std::int64_t> values,
                    std::vector<std::uint8_t> valid);
  static Column i64(std::string name, const std::vector<std::optional<std::int64_t>>& values);
  static Column text(std::string name, std::vector<std::string> values);
  static Column text(std::string name, std::vector<std::string> values,
                     std::vector<std::uint8_t> valid);
  static Column text(std::string name, const std::vector<std::optional<std::string>>& values);
  static Column boolean(std::string name, std::vector<std::uint8_t> values);
  static Column boolean(std::string name, std::vector<std::uint8_t> values,
                        std::vector<std::uint8_t> valid);
  static Column categorical(std::string name, std::vector<std::int32_t> codes,
                            std::vector<std::string> levels);
  static Column categorical(std::string name, std::vector<std::int32_t> codes,
                            std::vector<std::string> levels,
                            std::vector<std::uint8_t> valid);
  // Encodes text values with levels in first-appearance order.
  static Column categorical_from_text(std::string name,
                                      const std::vector<std::optional<std::string>>& values);
  // All-missing column of a given kind.
  static Column missing_of(std::string name, ValueKind kind, std::int64_t n);

  const std::string& name() const { return name_; }
  void rename(std::string name) { name_ = std::move(name); }
  ValueKind kind() const { return kind_; }
  std::int64_t size() const { return static_cast<std::int64_t>(valid_.size()); }

  bool is_valid(std::int64_t i) const { return valid_[static_cast<size_t>(i)] != 0; }
  const std::vector<std::uint8_t>& validity() const { return valid_; }
  std::int64_t valid_count() const;

  const std::vector<double>& f64_data() const;
  const std::vector<std::int64_t>& i64_data() const;
  const std::vector<std::string>& text_data() const;
  const std::vector<std::uint8_t>& bool_data() const;
  const Categorical& cat() const;

  const std::optional<std::string>& label() const { return label_; }
  void set_label(std::optional<std::string> label) { label_ = std::move(label); }

  // Group-name metadata attached by grouped reductions (use_group_names).
  const std::optional<std::vector<std::string>>& row_names() const { return row_names_; }
  void set_row_names(std::optional<std::vector<std::string>> names) {
    row_names_ = std::move(names);
  }

  bool is_numeric() const {
    return kind_ == ValueKind::float64 || kind_ == ValueKind::int64 ||
           kind_ == ValueKind::boolean;
  }

  Value value_at(std::int64_t i) const;
  // Numeric value as double; requires is_numeric(). Missing -> NaN.
  double number_at(std::int64_t i) const;
  // Whole column as doubles (missing -> NaN); requires is_numeric().
  std::vector<double> to_f64() const;

  // Gather rows. Indices must be in range.
  Column take(const std::vector<std::int64_t>& idx) const;
  // Gather with optional indices; -1 produces a missing row (used by joins
  // and time shifts).
  Column take_opt(const std::vector<std::int64_t>& idx) const;
  // Keep rows where mask is non-zero; mask length must equal size().
  Column filter(const std::vector<std::uint8_t>& mask) const;

  bool equal_values(const Column& other) const;  // kind, values, masks (not name/label)

 private:
  using Storage = std::variant<std::vector<double>, std::vector<std::int64_t>,
                               std::vector<std::string>, std::vector<std::uint8_t>,
                               Categorical>;

  std::string name_;
  ValueKind kind_ = ValueKind::float64;
  Storage data_;
  std::vector<std::uint8_t> valid_;
  std::optional<std::string> label_;
  std::optional<std::vector<std::string>> row_names_;

  void check_lengths() const;
  void normalize_nan();
};

}  // namespace foldframe
