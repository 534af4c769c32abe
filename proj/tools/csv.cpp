#include "csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace foldframe::cli {

namespace {

struct Field {
  std::string text;
  bool quoted = false;
};

// RFC-4180: quoted fields may contain separators, newlines and doubled quotes.
std::vector<std::vector<Field>> parse_records(const std::string& text) {
  std::vector<std::vector<Field>> records;
  std::vector<Field> record;
  Field field;
  bool in_quotes = false;
  bool field_started = false;
  size_t i = 0;
  auto end_field = [&]() {
    record.push_back(std::move(field));
    field = Field{};
    field_started = false;
  };
  auto end_record = [&]() {
    end_field();
    records.push_back(std::move(record));
    record.clear();
  };
  while (i < text.size()) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.text += '"';
          i += 2;
          continue;
        }
        in_quotes = false;
        ++i;
        continue;
      }
      field.text += c;
      ++i;
      continue;
    }
    if (c == '"' && !field_started) {
      in_quotes = true;
      field.quoted = true;
      field_started = true;
      ++i;
      continue;
    }
    if (c == ',') {
      end_field();
      ++i;
      continue;
    }
    if (c == '\r') {
      if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
      end_record();
      ++i;
      continue;
    }
    if (c == '\n') {
      end_record();
      ++i;
      continue;
    }
    field.text += c;
    field_started = true;
    ++i;
  }
  if (in_quotes) throw std::invalid_argument("csv: unterminated quoted field");
  if (field_started || !record.empty()) end_record();
  return records;
}

bool parse_int(const std::string& s, std::int64_t& out) {
  if (s.empty()) return false;
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

bool parse_float(const std::string& s, double& out) {
  if (s.empty()) return false;
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

}  // namespace

Frame parse_table(const std::string& text) {
  auto records = parse_records(text);
  if (records.empty()) throw std::invalid_argument("csv: empty input");
  const auto& header = records.front();
  size_t ncol = header.size();
  for (size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != ncol)
      throw std::invalid_argument("csv: row " + std::to_string(r) + " has " +
                                  std::to_string(records[r].size()) + " fields, expected " +
                                  std::to_string(ncol));
  }

  std::int64_t nrow = static_cast<std::int64_t>(records.size()) - 1;
  Frame out;
  for (size_t c = 0; c < ncol; ++c) {
    bool all_int = true, all_float = true, all_bool = true;
    bool any_value = false;
    for (size_t r = 1; r < records.size(); ++r) {
      const Field& f = records[r][c];
      if (f.text.empty() && !f.quoted) continue;  // missing
      any_value = true;
      std::int64_t iv;
      double dv;
      if (!parse_int(f.text, iv)) all_int = false;
      if (!parse_float(f.text, dv)) all_float = false;
      if (f.text != "true" && f.text != "false") all_bool = false;
    }
    std::string name = header[c].text;
    if (name.empty()) name = "V" + std::to_string(c + 1);

    std::vector<std::uint8_t> mask(static_cast<size_t>(nrow), 0);
    if (any_value && all_bool) {
      std::vector<std::uint8_t> v(static_cast<size_t>(nrow), 0);
      for (size_t r = 1; r < records.size(); ++r) {
        const Field& f = records[r][c];
        if (f.text.empty() && !f.quoted) continue;
        v[r - 1] = f.text == "true" ? 1 : 0;
        mask[r - 1] = 1;
      }
      out.add(Column::boolean(name, std::move(v), std::move(mask)));
    } else if (any_value && all_int) {
      std::vector<std::int64_t> v(static_cast<size_t>(nrow), 0);
      for (size_t r = 1; r < records.size(); ++r) {
        const Field& f = records[r][c];
        if (f.text.empty() && !f.quoted) continue;
        parse_int(f.text, v[r - 1]);
        mask[r - 1] = 1;
      }
      out.add(Column::i64(name, std::move(v), std::move(mask)));
    } else if (all_float) {  // also covers the all-missing column
      std::vector<double> v(static_cast<size_t>(nrow), 0.0);
      for (size_t r = 1; r < records.size(); ++r) {
        const Field& f = records[r][c];
        if (f.text.empty() && !f.quoted) continue;
        parse_float(f.text, v[r - 1]);
        mask[r - 1] = 1;
      }
      out.add(Column::f64(name, std::move(v), std::move(mask)));
    } else {
      std::vector<std::string> v(static_cast<size_t>(nrow));
      for (size_t r = 1; r < records.size(); ++r) {
        const Field& f = records[r][c];
        if (f.text.empty() && !f.quoted) continue;
        v[r - 1] = f.text;
        mask[r - 1] = 1;
      }
      out.add(Column::text(name, std::move(v), std::move(mask)));
    }
  }
  return out;
}

Frame read_table(const std::string& path, bool labels_sidecar) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  Frame frame = parse_table(buf.str());

  if (labels_sidecar) {
    std::ifstream side(path + ".labels.json");
    if (side) {
      nlohmann::json j = nlohmann::json::parse(side);
      for (std::int64_t i = 0; i < frame.ncol(); ++i) {
        Column& col = frame.column_mut(i);
        auto it = j.find(col.name());
        if (it != j.end() && it->is_string()) col.set_label(it->get<std::string>());
      }
    }
  }
  return frame;
}

namespace {

bool needs_quoting(const std::string& s) {
  if (s.empty()) return false;
  if (s.front() == ' ' || s.back() == ' ') return true;
  return s.find_first_of(",\"\n\r") != std::string::npos;
}

std::string render_field(const Column& col, std::int64_t i, int digits) {
  if (!col.is_valid(i)) return "";
  std::string s;
  if (digits >= 0 && col.kind() == ValueKind::float64) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, col.f64_data()[static_cast<size_t>(i)]);
    s = buf;
  } else {
    s = value_to_string(col.value_at(i));
  }
  if (s.empty()) return "\"\"";  // distinguish empty text from missing
  if (needs_quoting(s)) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += "\"\"";
      else q += c;
    }
    q += "\"";
    return q;
  }
  return s;
}

}  // namespace

void write_table(const Frame& frame, std::ostream& out, int display_digits) {
  for (std::int64_t c = 0; c < frame.ncol(); ++c) {
    if (c) out << ',';
    std::string name = frame.column(c).name();
    out << (needs_quoting(name)
                ? render_field(Column::text("h", std::vector<std::string>{name}), 0, -1)
                : name);
  }
  out << '\n';
  for (std::int64_t i = 0; i < frame.nrow(); ++i) {
    for (std::int64_t c = 0; c < frame.ncol(); ++c) {
      if (c) out << ',';
      out << render_field(frame.column(c), i, display_digits);
    }
    out << '\n';
  }
}

std::string format_table(const Frame& frame, int display_digits) {
  std::ostringstream out;
  write_table(frame, out, display_digits);
  return out.str();
}

void write_table(const Frame& frame, const std::string& path, int display_digits) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write " + path);
  write_table(frame, out, display_digits);
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path);

  bool any_label = false;
  for (const auto& c : frame.columns()) any_label = any_label || c.label().has_value();
  if (any_label) {
    nlohmann::ordered_json j;
    for (const auto& c : frame.columns()) {
      if (c.label()) j[c.name()] = *c.label();
    }
    std::ofstream side(path + ".labels.json", std::ios::binary);
    if (!side) throw std::invalid_argument("cannot write " + path + ".labels.json");
    side << j.dump(2) << '\n';
  }
}

}  // namespace foldframe::cli
