#pragma once

#include <iosfwd>
#include <string>

#include "foldframe/frame.hpp"

namespace foldframe::cli {

// Delimiter-separated values with a header row and RFC-4180-style quoting.
// Column kinds are inferred (integer within float within text; "true"/"false"
// make a boolean column; an unquoted empty field is missing). A sidecar file
// <path>.labels.json (a name -> label map) populates variable labels.
Frame read_table(const std::string& path, bool labels_sidecar = true);
Frame parse_table(const std::string& text);

// display_digits < 0 writes full round-trip precision (data mode); otherwise
// floats are rendered with that many significant digits (display mode).
// Labels go to the sidecar when any column carries one.
void write_table(const Frame& frame, const std::string& path, int display_digits = -1);
void write_table(const Frame& frame, std::ostream& out, int display_digits = -1);
std::string format_table(const Frame& frame, int display_digits = -1);

}  // namespace foldframe::cli
