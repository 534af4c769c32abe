#pragma once

#include <cmath>
#include <initializer_list>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "foldframe/frame.hpp"

namespace tf {

using foldframe::Column;
using foldframe::Frame;

inline Column fcol(std::string name, std::initializer_list<std::optional<double>> v) {
  return Column::f64(std::move(name), std::vector<std::optional<double>>(v));
}
inline Column fcol(std::string name, const std::vector<double>& v) {
  return Column::f64(std::move(name), v);
}
inline Column fcol(std::string name, const std::vector<std::optional<double>>& v) {
  return Column::f64(std::move(name), v);
}

inline Column icol(std::string name, std::initializer_list<std::optional<std::int64_t>> v) {
  return Column::i64(std::move(name), std::vector<std::optional<std::int64_t>>(v));
}
inline Column icol(std::string name, const std::vector<std::int64_t>& v) {
  return Column::i64(std::move(name), v);
}
inline Column icol(std::string name, const std::vector<std::optional<std::int64_t>>& v) {
  return Column::i64(std::move(name), v);
}

inline Column scol(std::string name, std::initializer_list<std::optional<std::string>> v) {
  return Column::text(std::move(name), std::vector<std::optional<std::string>>(v));
}
inline Column scol(std::string name, const std::vector<std::string>& v) {
  return Column::text(std::move(name), v);
}
inline Column scol(std::string name, const std::vector<std::optional<std::string>>& v) {
  return Column::text(std::move(name), v);
}

inline std::vector<std::optional<double>> values_of(const Column& c) {
  std::vector<std::optional<double>> out;
  for (std::int64_t i = 0; i < c.size(); ++i) {
    if (c.is_valid(i)) out.push_back(c.number_at(i));
    else out.push_back(std::nullopt);
  }
  return out;
}

inline bool near(double a, double b, double tol = 1e-12) {
  if (std::isnan(a) || std::isnan(b)) return false;
  double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  return std::fabs(a - b) <= tol * scale;
}

inline bool frames_equal(const Frame& a, const Frame& b, bool check_labels = false) {
  if (a.ncol() != b.ncol() || a.nrow() != b.nrow()) return false;
  for (std::int64_t c = 0; c < a.ncol(); ++c) {
    const Column& ca = a.column(c);
    const Column& cb = b.column(c);
    if (ca.name() != cb.name()) return false;
    if (!ca.equal_values(cb)) return false;
    if (check_labels && ca.label() != cb.label()) return false;
  }
  return true;
}

}  // namespace tf
