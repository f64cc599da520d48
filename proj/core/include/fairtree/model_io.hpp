#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "fairtree/csv.hpp"
#include "fairtree/tree.hpp"

namespace fairtree {

struct ModelNode {
  std::int32_t id = 0;
  std::optional<SplitRule> rule;  // nullopt: leaf
  std::int32_t left = -1, right = -1;
  std::int32_t cluster = -1;  // leaves only
  std::int64_t n = 0;
  double compactness = 0.0, fairness = 0.0;
  std::vector<std::vector<std::int64_t>> group_counts;

  bool is_leaf() const { return !rule.has_value(); }
};

// Self-contained serialized form of a fitted tree: everything prediction and
// export need, nothing tied to the in-memory fitting state.
struct ModelDocument {
  int format_version = 1;
  std::string algorithm;  // "IFCT" or "IFCT-P"
  FitConfig config;
  bool lambda_set = true;  // false for IFCT-P (no lambda in play)
  std::vector<Column> schema_columns;
  std::optional<FeatureScaling> scaling;
  std::vector<std::vector<std::string>> cat_dicts, sens_dicts;
  std::vector<std::string> label_tokens;
  std::int32_t root = 0;
  std::vector<ModelNode> nodes;  // ascending id = creation order
  double total_compactness = 0.0, total_fairness = 0.0;
  bool exhausted = false;
  std::int64_t negative_gain_splits = 0;
  std::string created_at;            // RFC 3339 UTC
  std::string dataset_fingerprint;   // "fnv1a64:<16 hex>"

  // Derived by finish(): feature names per role and the id -> index map.
  std::vector<std::string> num_names, cat_names, sens_names;
  std::string label_name;
  std::unordered_map<std::int32_t, std::size_t> index_of;

  // Derives lookups and validates structure: unique ids, a single root,
  // every non-root node referenced exactly once, no cycles, no unreachable
  // nodes, rules and dictionaries consistent. Throws Error.
  void finish();

  std::int32_t route(std::span<const double> num_values,
                     std::span<const std::int32_t> cat_ids) const;
  std::size_t leaf_count() const;
};

ModelDocument build_document(const ClusteringTree& t);

// Canonical bytes: fixed key order, 17-significant-digit decimal floats.
// Identical documents serialize to identical bytes.
std::string save_model(const ModelDocument& doc);
std::string save_model(const ClusteringTree& t);
void save_model_file(const std::string& path, const ModelDocument& doc);

ModelDocument load_model(const std::string& bytes);
ModelDocument load_model_file(const std::string& path);

// One line per leaf, root-to-leaf conditions joined with AND, in cluster id
// order. A root-only tree yields one unconditioned line.
std::string export_rules(const ModelDocument& doc);

// Graphviz digraph: internal nodes labeled with their rule, leaves with
// cluster id, size and per-attribute group proportions.
std::string export_dot(const ModelDocument& doc);

// Routes each row of the table through the model. The table must contain all
// of the model's feature columns (by name); extra columns are ignored here.
std::vector<std::int32_t> predict_assignments(const ModelDocument& doc,
                                              const csv::Table& input,
                                              bool permissive);

// Input table plus a trailing "cluster" column, row order preserved.
csv::Table predict_batch(const ModelDocument& doc, const csv::Table& input,
                         bool permissive);

}  // namespace fairtree
