#include "fairtree/schema.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "fairtree/error.hpp"

namespace fairtree {

ColumnRole role_from_string(const std::string& s) {
  if (s == "numerical") return ColumnRole::Numerical;
  if (s == "categorical") return ColumnRole::Categorical;
  if (s == "sensitive") return ColumnRole::Sensitive;
  if (s == "label") return ColumnRole::Label;
  if (s == "ignore") return ColumnRole::Ignore;
  throw Error("schema: unknown column role \"" + s + "\"");
}

const char* to_string(ColumnRole role) {
  switch (role) {
    case ColumnRole::Numerical: return "numerical";
    case ColumnRole::Categorical: return "categorical";
    case ColumnRole::Sensitive: return "sensitive";
    case ColumnRole::Label: return "label";
    case ColumnRole::Ignore: return "ignore";
  }
  return "?";
}

Schema Schema::from_json(const std::string& text) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw Error(std::string("schema: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw Error("schema: expected a JSON object mapping column name to role");
  }
  Schema s;
  for (const auto& [name, value] : doc.items()) {
    if (!value.is_string()) {
      throw Error("schema: role for column \"" + name + "\" must be a string");
    }
    s.columns.push_back({name, role_from_string(value.get<std::string>())});
  }
  s.validate();
  return s;
}

Schema Schema::from_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("schema: cannot open \"" + path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

std::string Schema::to_json() const {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (const auto& col : columns) doc[col.name] = to_string(col.role);
  return doc.dump(2) + "\n";
}

void Schema::validate() const {
  std::unordered_set<std::string> seen;
  std::size_t features = 0, labels = 0;
  for (const auto& col : columns) {
    if (col.name.empty()) throw Error("schema: empty column name");
    if (!seen.insert(col.name).second) {
      throw Error("schema: duplicate column name \"" + col.name + "\"");
    }
    if (col.role == ColumnRole::Numerical || col.role == ColumnRole::Categorical) {
      ++features;
    }
    if (col.role == ColumnRole::Label) ++labels;
  }
  if (features == 0) {
    throw Error("schema: at least one numerical or categorical column required");
  }
  if (labels > 1) throw Error("schema: more than one label column");
}

std::vector<std::string> Schema::names_with(ColumnRole role) const {
  std::vector<std::string> out;
  for (const auto& col : columns) {
    if (col.role == role) out.push_back(col.name);
  }
  return out;
}

}  // namespace fairtree
