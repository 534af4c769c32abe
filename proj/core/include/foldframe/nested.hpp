#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "foldframe/frame.hpp"

namespace foldframe {

// Recursive nested-value tree: scalar, column, frame, labeled-matrix or an
// ordered named branch of further nodes.
class Node {
 public:
  struct Matrix {
    std::vector<std::string> row_names;
    Frame data;  // equal-length numeric/text columns
  };
  using Branch = std::vector<std::pair<std::string, Node>>;

  Node() : payload_(Value{std::monostate{}}) {}

  static Node scalar(Value v) { return Node(Payload(std::move(v))); }
  static Node column(Column c) { return Node(Payload(std::move(c))); }
  static Node frame(Frame f) { return Node(Payload(std::move(f))); }
  static Node matrix(Matrix m) { return Node(Payload(std::move(m))); }
  static Node branch(Branch b);

  bool is_scalar() const { return std::holds_alternative<Value>(payload_); }
  bool is_column() const { return std::holds_alternative<Column>(payload_); }
  bool is_frame() const { return std::holds_alternative<Frame>(payload_); }
  bool is_matrix() const { return std::holds_alternative<Matrix>(payload_); }
  bool is_branch() const { return std::holds_alternative<Branch>(payload_); }
  bool is_leaf() const { return !is_branch(); }

  const Value& as_scalar() const { return std::get<Value>(payload_); }
  const Column& as_column() const { return std::get<Column>(payload_); }
  const Frame& as_frame() const { return std::get<Frame>(payload_); }
  const Matrix& as_matrix() const { return std::get<Matrix>(payload_); }
  const Branch& children() const { return std::get<Branch>(payload_); }
  Branch& children_mut() { return std::get<Branch>(payload_); }

 private:
  using Payload = std::variant<Value, Column, Frame, Matrix, Branch>;
  explicit Node(Payload p) : payload_(std::move(p)) {}
  Payload payload_;
};

// Recursively splits a frame by the key columns (in order); leaves hold the
// residual columns (a bare Column when only one remains). flatten produces a
// single level keyed by the interacted keys joined with ".".
Node split_frame(const Frame& frame, const std::vector<std::string>& keys, bool flatten = false,
                 std::optional<bool> sort = std::nullopt);

// Name match on branch entries, or a predicate evaluated on candidate nodes.
using NodeSelector = std::variant<std::string, std::function<bool(const Node&)>>;

// Keeps only subtrees containing a match. By default the retained tree is
// simplified: any depth level whose branches all have exactly one child is
// spliced out. keep_tree preserves the full path structure.
std::optional<Node> filter_tree(const Node& node, const NodeSelector& selector,
                                bool keep_tree = false);

bool has_element(const Node& node, const NodeSelector& selector);

// Swaps the outer and inner names of a two-level branch structure; absent
// combinations stay absent.
Node transpose_tree(const Node& node);

// Stacks branch members (frames or records of scalars) into one frame,
// union-filling missing columns; idcol records the member names.
Frame bind_rows(const Node& node, const std::optional<std::string>& idcol = std::nullopt);

// Depth-first flattening of an arbitrary tree into a frame. idcols names one
// id column per level; deeper unnamed levels get positional ids. Matrix
// leaves contribute their row labels as the row_names column when requested.
Frame flatten_tree(const Node& node, const std::vector<std::string>& idcols = {},
                   const std::optional<std::string>& row_names = std::nullopt);

}  // namespace foldframe
