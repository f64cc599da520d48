#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fairtree::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;  // every row has header.size() fields

  std::optional<std::size_t> column_index(const std::string& name) const;
};

// RFC 4180 parsing: quoted fields with "" escapes, embedded commas and
// newlines inside quotes, CRLF or LF line endings, optional trailing newline.
// Ragged rows are an error. The header row is required.
Table parse(const std::string& text);

// Reads the whole file; raw_bytes (when non-null) receives the unparsed
// content so callers can fingerprint exactly what was ingested.
Table parse_file(const std::string& path, std::string* raw_bytes = nullptr);

std::string escape_field(const std::string& field);
std::string write(const Table& table);

// Shortest round-trip decimal representation (std::to_chars).
std::string format_double(double v);

// Strict full-token parse; rejects trailing garbage, empty tokens and
// non-finite values. Returns false without touching errno.
bool parse_double(const std::string& token, double& out);

}  // namespace fairtree::csv
