#pragma once

#include <string>

#include "foldframe/nested.hpp"

namespace foldframe::cli {

// Hierarchical text format for nested-value trees: branches become objects,
// columns become arrays of scalars, frames become arrays of row objects and
// scalars map to themselves (missing -> null).
std::string node_to_json(const Node& node);
Node node_from_json(const std::string& text);

}  // namespace foldframe::cli
