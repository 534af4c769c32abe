#include "node_json.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

#include "value_assembly.hpp"

namespace foldframe::cli {

namespace {

using Json = nlohmann::ordered_json;

Json value_to_json(const Value& v) {
  if (value_missing(v)) return nullptr;
  if (std::holds_alternative<double>(v)) return std::get<double>(v);
  if (std::holds_alternative<std::int64_t>(v)) return std::get<std::int64_t>(v);
  if (std::holds_alternative<bool>(v)) return std::get<bool>(v);
  return std::get<std::string>(v);
}

Json frame_to_json(const Frame& f) {
  Json rows = Json::array();
  for (std::int64_t i = 0; i < f.nrow(); ++i) {
    Json row = Json::object();
    for (const auto& c : f.columns()) row[c.name()] = value_to_json(c.value_at(i));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const Node& node) {
  if (node.is_scalar()) return value_to_json(node.as_scalar());
  if (node.is_column()) {
    Json arr = Json::array();
    const Column& c = node.as_column();
    for (std::int64_t i = 0; i < c.size(); ++i) arr.push_back(value_to_json(c.value_at(i)));
    return arr;
  }
  if (node.is_frame()) return frame_to_json(node.as_frame());
  if (node.is_matrix()) {
    const auto& m = node.as_matrix();
    Json rows = Json::array();
    for (std::int64_t i = 0; i < m.data.nrow(); ++i) {
      Json row = Json::object();
      row["_row"] = m.row_names[static_cast<size_t>(i)];
      for (const auto& c : m.data.columns()) row[c.name()] = value_to_json(c.value_at(i));
      rows.push_back(std::move(row));
    }
    return rows;
  }
  Json obj = Json::object();
  int pos = 0;
  for (const auto& [name, child] : node.children()) {
    ++pos;
    obj[name.empty() ? std::to_string(pos) : name] = to_json(child);
  }
  return obj;
}

Value json_to_value(const Json& j) {
  if (j.is_null()) return std::monostate{};
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  throw std::invalid_argument("unsupported scalar in tree input");
}

Column column_from_values(const std::string& name, const std::vector<Value>& vals) {
  bool any_text = false, any_float = false, any_int = false, any_bool = false;
  for (const auto& v : vals) {
    if (std::holds_alternative<std::string>(v)) any_text = true;
    else if (std::holds_alternative<double>(v)) any_float = true;
    else if (std::holds_alternative<std::int64_t>(v)) any_int = true;
    else if (std::holds_alternative<bool>(v)) any_bool = true;
  }
  ValueKind kind = ValueKind::float64;
  if (any_text) kind = ValueKind::text;
  else if (any_float) kind = ValueKind::float64;
  else if (any_int) kind = ValueKind::int64;
  else if (any_bool) kind = ValueKind::boolean;
  return detail::assemble_values(name, kind, vals);
}

Node from_json(const Json& j) {
  if (j.is_object()) {
    Node::Branch children;
    for (const auto& [key, value] : j.items()) children.emplace_back(key, from_json(value));
    return Node::branch(std::move(children));
  }
  if (j.is_array()) {
    bool all_objects = !j.empty();
    for (const auto& e : j) all_objects = all_objects && e.is_object();
    if (all_objects) {
      // array of row records -> frame
      std::vector<std::string> col_order;
      for (const auto& row : j) {
        for (const auto& [key, value] : row.items()) {
          if (std::find(col_order.begin(), col_order.end(), key) == col_order.end())
            col_order.push_back(key);
        }
      }
      Frame f;
      for (const auto& cname : col_order) {
        std::vector<Value> vals;
        vals.reserve(j.size());
        for (const auto& row : j) {
          auto it = row.find(cname);
          vals.push_back(it == row.end() ? Value{std::monostate{}} : json_to_value(*it));
        }
        f.add(column_from_values(cname, vals));
      }
      return Node::frame(std::move(f));
    }
    std::vector<Value> vals;
    vals.reserve(j.size());
    for (const auto& e : j) vals.push_back(json_to_value(e));
    return Node::column(column_from_values("value", vals));
  }
  return Node::scalar(json_to_value(j));
}

}  // namespace

std::string node_to_json(const Node& node) { return to_json(node).dump(2); }

Node node_from_json(const std::string& text) {
  return from_json(Json::parse(text));
}

}  // namespace foldframe::cli
