#include "foldframe/nested.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "foldframe/grouping.hpp"
#include "value_assembly.hpp"

namespace foldframe {

Node Node::branch(Branch b) {
  std::unordered_set<std::string> seen;
  for (const auto& [name, child] : b) {
    if (!name.empty() && !seen.insert(name).second)
      throw std::invalid_argument("branch names must be unique, duplicate " + name);
  }
  return Node(Payload(std::move(b)));
}

namespace {

Node leaf_for(const Frame& residual) {
  if (residual.ncol() == 1) return Node::column(residual.column(std::int64_t{0}));
  return Node::frame(residual);
}

Node split_recursive(const Frame& frame, const std::vector<std::string>& keys, size_t level,
                     std::optional<bool> sort) {
  if (level == keys.size()) {
    std::vector<std::string> rest;
    for (const auto& name : frame.names()) {
      if (std::find(keys.begin(), keys.end(), name) == keys.end()) rest.push_back(name);
    }
    return leaf_for(select(frame, rest));
  }
  Grouping g = group_by(frame.column(keys[level]), sort, true);
  const Ordering& ord = g.ordering();
  Node::Branch children;
  std::vector<std::string> labels = g.group_labels();
  for (std::int64_t k = 0; k < g.n_groups(); ++k) {
    std::int64_t lo = ord.starts[static_cast<size_t>(k)];
    std::int64_t cnt = g.group_sizes()[static_cast<size_t>(k)];
    std::vector<std::int64_t> rows(ord.perm.begin() + lo, ord.perm.begin() + lo + cnt);
    std::sort(rows.begin(), rows.end());  // keep original row order inside each branch
    Frame sub = frame.take(rows);
    children.emplace_back(labels[static_cast<size_t>(k)],
                          split_recursive(sub, keys, level + 1, sort));
  }
  return Node::branch(std::move(children));
}

}  // namespace

Node split_frame(const Frame& frame, const std::vector<std::string>& keys, bool flatten,
                 std::optional<bool> sort) {
  if (keys.empty()) throw std::invalid_argument("split_frame: no key columns supplied");
  for (const auto& k : keys) {
    if (!frame.has(k)) throw std::invalid_argument("split_frame: unknown key column " + k);
  }
  if (!flatten) return split_recursive(frame, keys, 0, sort);

  Grouping g = group_by(select(frame, keys), sort, true);
  const Ordering& ord = g.ordering();
  std::vector<std::string> rest;
  for (const auto& name : frame.names()) {
    if (std::find(keys.begin(), keys.end(), name) == keys.end()) rest.push_back(name);
  }
  Node::Branch children;
  std::vector<std::string> labels = g.group_labels();
  for (std::int64_t k = 0; k < g.n_groups(); ++k) {
    std::int64_t lo = ord.starts[static_cast<size_t>(k)];
    std::int64_t cnt = g.group_sizes()[static_cast<size_t>(k)];
    std::vector<std::int64_t> rows(ord.perm.begin() + lo, ord.perm.begin() + lo + cnt);
    std::sort(rows.begin(), rows.end());
    children.emplace_back(labels[static_cast<size_t>(k)], leaf_for(select(frame.take(rows), rest)));
  }
  return Node::branch(std::move(children));
}

namespace {

bool selector_matches_node(const NodeSelector& sel, const Node& node) {
  if (const auto* pred = std::get_if<std::function<bool(const Node&)>>(&sel))
    return (*pred)(node);
  return false;
}

bool selector_matches_name(const NodeSelector& sel, const std::string& name) {
  if (const auto* s = std::get_if<std::string>(&sel)) return *s == name;
  return false;
}

std::optional<Node> filter_recursive(const Node& node, const NodeSelector& sel) {
  if (!node.is_branch()) return std::nullopt;
  Node::Branch kept;
  for (const auto& [name, child] : node.children()) {
    if (selector_matches_name(sel, name) || selector_matches_node(sel, child)) {
      kept.emplace_back(name, child);
    } else if (child.is_branch()) {
      auto sub = filter_recursive(child, sel);
      if (sub) kept.emplace_back(name, std::move(*sub));
    }
  }
  if (kept.empty()) return std::nullopt;
  return Node::branch(std::move(kept));
}

// Splices every tree level whose branches all have exactly one child.
void collect_depth(const Node& node, int depth, std::vector<std::vector<int>>& counts) {
  if (!node.is_branch()) return;
  if (static_cast<size_t>(depth) >= counts.size()) counts.resize(static_cast<size_t>(depth) + 1);
  counts[static_cast<size_t>(depth)].push_back(static_cast<int>(node.children().size()));
  for (const auto& [name, child] : node.children()) collect_depth(child, depth + 1, counts);
}

Node splice_level(const Node& node, int depth, int target) {
  if (!node.is_branch()) return node;
  if (depth == target) {
    // single child guaranteed; hoist it, leaving deeper levels untouched
    return node.children().front().second;
  }
  Node::Branch out;
  for (const auto& [name, child] : node.children())
    out.emplace_back(name, splice_level(child, depth + 1, target));
  return Node::branch(std::move(out));
}

Node simplify(Node node) {
  for (;;) {
    std::vector<std::vector<int>> counts;
    collect_depth(node, 0, counts);
    int target = -1;
    for (size_t d = 0; d < counts.size(); ++d) {
      if (counts[d].empty()) continue;
      bool all_single = std::all_of(counts[d].begin(), counts[d].end(),
                                    [](int c) { return c == 1; });
      if (all_single) {
        target = static_cast<int>(d);
        break;
      }
    }
    if (target < 0) return node;
    node = splice_level(node, 0, target);
    if (!node.is_branch()) return node;
  }
}

}  // namespace

std::optional<Node> filter_tree(const Node& node, const NodeSelector& selector, bool keep_tree) {
  if (selector_matches_node(selector, node)) return node;
  auto filtered = filter_recursive(node, selector);
  if (!filtered) return std::nullopt;
  if (keep_tree) return filtered;
  return simplify(std::move(*filtered));
}

bool has_element(const Node& node, const NodeSelector& selector) {
  return filter_tree(node, selector, true).has_value();
}

Node transpose_tree(const Node& node) {
  if (!node.is_branch())
    throw std::invalid_argument("transpose_tree: node is not a two-level branch structure");
  std::vector<std::string> inner_order;
  std::unordered_set<std::string> seen;
  for (const auto& [outer, child] : node.children()) {
    if (!child.is_branch())
      throw std::invalid_argument("transpose_tree: entry " + outer + " is not a branch");
    for (const auto& [inner, leaf] : child.children()) {
      if (seen.insert(inner).second) inner_order.push_back(inner);
    }
  }
  Node::Branch out;
  for (const auto& inner : inner_order) {
    Node::Branch row;
    for (const auto& [outer, child] : node.children()) {
      for (const auto& [name, leaf] : child.children()) {
        if (name == inner) row.emplace_back(outer, leaf);
      }
    }
    out.emplace_back(inner, Node::branch(std::move(row)));
  }
  return Node::branch(std::move(out));
}

namespace {

bool is_record_branch(const Node& node) {
  if (!node.is_branch() || node.children().empty()) return false;
  return std::all_of(node.children().begin(), node.children().end(),
                     [](const auto& e) { return e.second.is_scalar(); });
}

Frame record_to_frame(const Node& node) {
  Frame out;
  int pos = 0;
  for (const auto& [name, child] : node.children()) {
    ++pos;
    std::string cname = name.empty() ? "V" + std::to_string(pos) : name;
    out.add(detail::assemble_values(
        cname, value_missing(child.as_scalar()) ? ValueKind::float64
               : std::holds_alternative<std::string>(child.as_scalar()) ? ValueKind::text
               : std::holds_alternative<bool>(child.as_scalar()) ? ValueKind::boolean
               : std::holds_alternative<std::int64_t>(child.as_scalar()) ? ValueKind::int64
                                                                         : ValueKind::float64,
        {child.as_scalar()}));
  }
  return out;
}

Frame column_to_frame(const Column& col) {
  Column c = col;
  if (c.name().empty()) c.rename("value");
  Frame out;
  out.add(std::move(c));
  return out;
}

Frame matrix_to_frame(const Node::Matrix& m, const std::optional<std::string>& row_names) {
  Frame out;
  if (row_names) {
    out.add(Column::text(*row_names, std::vector<std::string>(m.row_names)));
    return add_vars(out, m.data);
  }
  return m.data;
}

// Union-fill stacking shared by bind_rows and flatten_tree.
Frame stack_frames(const std::vector<std::pair<std::string, Frame>>& members,
                   const std::optional<std::string>& idcol) {
  std::vector<std::string> col_order;
  std::unordered_map<std::string, ValueKind> kinds;
  std::int64_t total = 0;
  for (const auto& [name, f] : members) {
    total += f.nrow();
    for (const auto& c : f.columns()) {
      auto it = kinds.find(c.name());
      if (it == kinds.end()) {
        kinds.emplace(c.name(), c.kind());
        col_order.push_back(c.name());
      } else {
        it->second = detail::promote_kinds(it->second, c.kind());
      }
    }
  }

  Frame out;
  if (idcol) {
    std::vector<std::string> ids;
    ids.reserve(static_cast<size_t>(total));
    for (const auto& [name, f] : members)
      ids.insert(ids.end(), static_cast<size_t>(f.nrow()), name);
    out.add(Column::text(*idcol, std::move(ids)));
  }
  for (const auto& cname : col_order) {
    std::vector<Value> vals;
    vals.reserve(static_cast<size_t>(total));
    for (const auto& [name, f] : members) {
      if (f.has(cname)) {
        const Column& c = f.column(cname);
        for (std::int64_t i = 0; i < c.size(); ++i) vals.push_back(c.value_at(i));
      } else {
        vals.insert(vals.end(), static_cast<size_t>(f.nrow()), Value{std::monostate{}});
      }
    }
    Column col = detail::assemble_values(cname, kinds.at(cname), vals);
    // first member carrying the column provides the label
    for (const auto& [name, f] : members) {
      if (f.has(cname) && f.column(cname).label()) {
        col.set_label(f.column(cname).label());
        break;
      }
    }
    out.add(std::move(col));
  }
  return out;
}

Frame flatten_recursive(const Node& node, const std::vector<std::string>& idcols, size_t depth,
                        const std::optional<std::string>& row_names) {
  if (node.is_scalar()) return record_to_frame(Node::branch({{"V1", node}}));
  if (node.is_column()) return column_to_frame(node.as_column());
  if (node.is_frame()) return node.as_frame();
  if (node.is_matrix()) return matrix_to_frame(node.as_matrix(), row_names);
  if (is_record_branch(node)) return record_to_frame(node);

  std::vector<std::pair<std::string, Frame>> members;
  int pos = 0;
  for (const auto& [name, child] : node.children()) {
    ++pos;
    // levels beyond the supplied idcols get positional ids
    std::string id = depth < idcols.size() ? (name.empty() ? std::to_string(pos) : name)
                                           : std::to_string(pos);
    members.emplace_back(id, flatten_recursive(child, idcols, depth + 1, row_names));
  }
  std::string idname =
      depth < idcols.size() ? idcols[depth] : "id" + std::to_string(depth + 1);
  return stack_frames(members, idname);
}

}  // namespace

Frame bind_rows(const Node& node, const std::optional<std::string>& idcol) {
  if (!node.is_branch()) throw std::invalid_argument("bind_rows: node is not a branch");
  std::vector<std::pair<std::string, Frame>> members;
  int pos = 0;
  for (const auto& [name, child] : node.children()) {
    ++pos;
    std::string id = name.empty() ? std::to_string(pos) : name;
    Frame f;
    if (child.is_frame()) f = child.as_frame();
    else if (is_record_branch(child)) f = record_to_frame(child);
    else if (child.is_column()) f = column_to_frame(child.as_column());
    else
      throw std::invalid_argument("bind_rows: member " + id +
                                  " is not a frame or a record of scalars");
    members.emplace_back(id, std::move(f));
  }
  return stack_frames(members, idcol);
}

Frame flatten_tree(const Node& node, const std::vector<std::string>& idcols,
                   const std::optional<std::string>& row_names) {
  return flatten_recursive(node, idcols, 0, row_names);
}

}  // namespace foldframe
