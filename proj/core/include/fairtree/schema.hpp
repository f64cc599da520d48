#pragma once

#include <string>
#include <vector>

namespace fairtree {

enum class ColumnRole { Numerical, Categorical, Sensitive, Label, Ignore };

ColumnRole role_from_string(const std::string& s);  // throws on unknown role
const char* to_string(ColumnRole role);

struct Column {
  std::string name;
  ColumnRole role;

  bool operator==(const Column&) const = default;
};

// Ordered column list. Order is load-bearing: feature indices (and therefore
// split tie-breaking) follow the declaration order of each role.
struct Schema {
  std::vector<Column> columns;

  static Schema from_json(const std::string& text);
  static Schema from_json_file(const std::string& path);
  std::string to_json() const;

  // Unique names, at least one numerical or categorical column, at most one
  // label column. Throws Error otherwise.
  void validate() const;

  std::vector<std::string> names_with(ColumnRole role) const;
};

}  // namespace fairtree
