#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairtree/metrics.hpp"
#include "fairtree/tree.hpp"

namespace fairtree {

struct LeafSummary {
  std::int32_t cluster = 0;
  std::int64_t n = 0;
  double compactness = 0.0, fairness = 0.0;
  std::vector<std::vector<double>> group_shares;  // per attribute, per group
};

// Everything a fit run reports: sizes, totals, per-cluster table and the
// label/fairness metrics that apply to the training data.
struct RunReport {
  std::string algorithm;
  std::size_t k_requested = 0, k_actual = 0;
  std::optional<double> lambda;  // absent when the algorithm has no lambda
  std::size_t n = 0, num_features = 0, cat_features = 0, sens_attrs = 0;
  double total_compactness = 0.0, total_fairness = 0.0;
  std::optional<double> objective;  // compactness + lambda * fairness
  bool exhausted = false;
  std::int64_t negative_gain_splits = 0;
  std::vector<LeafSummary> leaves;  // cluster id order
  std::optional<double> acc, nmi;   // only when the data has labels
  FairnessReport fairness;
  std::vector<std::string> sens_names;
  std::vector<std::vector<std::string>> sens_groups;
  double fit_seconds = 0.0;
};

// assignments must be the tree's clustering of ds (pass them in so callers
// that already routed the data do not pay for it twice).
RunReport build_report(const ClusteringTree& t, const Dataset& ds,
                       std::span<const std::int32_t> assignments,
                       double fit_seconds);

std::string to_json(const RunReport& r);
std::string to_text(const RunReport& r);

}  // namespace fairtree
