#include "fairtree/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fairtree/error.hpp"

namespace fairtree::csv {

std::optional<std::size_t> Table::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

namespace {

// Splits one logical record starting at pos. Returns false at end of input.
bool next_record(const std::string& text, std::size_t& pos,
                 std::vector<std::string>& out, std::size_t record_no) {
  out.clear();
  const std::size_t n = text.size();
  if (pos >= n) return false;
  std::string field;
  bool in_quotes = false;
  bool saw_any = false;
  while (pos <= n) {
    if (pos == n) {
      if (in_quotes) {
        throw Error("csv: unterminated quoted field in record " +
                    std::to_string(record_no));
      }
      out.push_back(std::move(field));
      saw_any = true;
      break;
    }
    char c = text[pos];
    if (in_quotes) {
      if (c == '"') {
        if (pos + 1 < n && text[pos + 1] == '"') {
          field.push_back('"');
          pos += 2;
        } else {
          in_quotes = false;
          ++pos;
          if (pos < n && text[pos] != ',' && text[pos] != '\n' &&
              text[pos] != '\r') {
            throw Error("csv: stray content after closing quote in record " +
                        std::to_string(record_no));
          }
        }
      } else {
        field.push_back(c);
        ++pos;
      }
      continue;
    }
    if (c == '"' && field.empty()) {
      in_quotes = true;
      ++pos;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
      ++pos;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && pos + 1 < n && text[pos + 1] == '\n') ++pos;
      ++pos;
      out.push_back(std::move(field));
      saw_any = true;
      break;
    } else {
      field.push_back(c);
      ++pos;
    }
  }
  return saw_any;
}

}  // namespace

Table parse(const std::string& text) {
  Table t;
  std::size_t pos = 0;
  std::vector<std::string> record;
  if (!next_record(text, pos, record, 1)) {
    throw Error("csv: empty input, header row required");
  }
  t.header = record;
  std::size_t record_no = 1;
  while (next_record(text, pos, record, ++record_no)) {
    // A lone trailing newline yields one empty single-field record; skip it.
    if (record.size() == 1 && record[0].empty() && pos >= text.size()) break;
    if (record.size() != t.header.size()) {
      throw Error("csv: row " + std::to_string(record_no - 1) + " has " +
                  std::to_string(record.size()) + " fields, expected " +
                  std::to_string(t.header.size()));
    }
    t.rows.push_back(record);
  }
  return t;
}

Table parse_file(const std::string& path, std::string* raw_bytes) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("csv: cannot open \"" + path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string content = buf.str();
  if (raw_bytes) *raw_bytes = content;
  return parse(content);
}

std::string escape_field(const std::string& field) {
  bool needs_quotes = false;
  for (char c : field) {
    if (c == ',' || c == '"' || c == '\n' || c == '\r') {
      needs_quotes = true;
      break;
    }
  }
  if (!needs_quotes) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

std::string write(const Table& table) {
  std::string out;
  auto write_row = [&out](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out.push_back(',');
      out += escape_field(row[i]);
    }
    out.push_back('\n');
  };
  write_row(table.header);
  for (const auto& row : table.rows) write_row(row);
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

bool parse_double(const std::string& token, double& out) {
  if (token.empty()) return false;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || ptr != token.data() + token.size()) return false;
  if (!std::isfinite(v)) return false;
  out = v;
  return true;
}

}  // namespace fairtree::csv
