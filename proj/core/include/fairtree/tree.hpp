#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairtree/dataset.hpp"
#include "fairtree/split.hpp"

namespace fairtree {

struct FitConfig {
  std::size_t k = 1;
  double lambda = 0.0;
  std::optional<std::vector<double>> weights;  // per sensitive attribute
  std::int64_t n_min = 1;
  double epsilon = 1e-12;
  std::int32_t cat_cap = 12;
  bool standardize = false;

  void validate() const;  // throws Error
};

struct TreeNode {
  std::int32_t id = 0;
  std::int32_t parent = -1;
  std::int32_t left = -1, right = -1;
  std::optional<SplitRule> rule;  // nullopt: leaf
  std::int32_t cluster = -1;      // leaves only, assigned at finalization
  NodeStats stats;
  std::vector<std::int32_t> samples;  // leaves only; internal nodes drop theirs
  SplitEvaluation cached;             // best rule, computed once at creation
  double fairness = 0.0;              // deviation of this node's distribution
  double compactness = 0.0;           // filled at finalization

  bool is_leaf() const { return !rule.has_value(); }
};

struct SplitRecord {
  std::int32_t node = 0;
  SplitRule rule;
  double gain = 0.0;
};

struct ClusteringTree {
  std::vector<TreeNode> nodes;  // indexed by id, creation order; pruning may
                                // leave unreachable entries behind
  std::int32_t root = 0;
  std::vector<std::int32_t> leaves;  // left-to-right depth-first order
  std::string algorithm;             // "IFCT" or "IFCT-P"
  FitConfig config;
  MixedWeight weight;
  SensitiveProfile profile;
  double total_compactness = 0.0;
  double total_fairness = 0.0;
  bool exhausted = false;               // ran out of feasible splits before k
  std::int64_t negative_gain_splits = 0;
  std::vector<SplitRecord> split_trace;  // growth order, pre-pruning

  // Metadata snapshot so the tree routes and serializes on its own.
  std::vector<Column> schema_columns;
  std::vector<std::string> num_names, cat_names, sens_names;
  std::string label_name;
  std::vector<Dictionary> cat_dicts, sens_dicts;
  Dictionary label_dict;
  std::optional<FeatureScaling> scaling;
  std::uint64_t dataset_fingerprint = 0;

  std::size_t leaf_count() const { return leaves.size(); }

  // Routes raw feature values (standardization, when fitted with it, is
  // applied internally). Unknown categories may be passed as id -1 and route
  // right. Returns the leaf's cluster id.
  std::int32_t route_row(std::span<const double> num_values,
                         std::span<const std::int32_t> cat_ids) const;

  // Routes row i of a dataset whose dictionaries match the fitting dataset's
  // (use the original, un-standardized dataset).
  std::int32_t route_dataset_row(const Dataset& ds, std::size_t i) const;

  std::vector<std::int32_t> assignments(const Dataset& ds) const;
};

// Greedy best-first growth: repeatedly splits the leaf with the largest
// cached objective gain (ties to the smaller node id) until k leaves exist or
// no leaf has a feasible rule (the tree is then flagged exhausted).
ClusteringTree fit_ifct(const Dataset& ds, const FitConfig& cfg);

}  // namespace fairtree
