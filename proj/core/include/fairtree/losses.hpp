#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fairtree/dataset.hpp"

namespace fairtree {

// Additive sufficient statistics of a sample subset: count, per-numerical-
// feature sum and sum of squares, per-categorical-feature category counts,
// per-sensitive-attribute group counts. Subtraction of a subset from its
// superset is exact for all integer fields.
struct NodeStats {
  std::int64_t count = 0;
  std::vector<double> sum, sumsq;
  std::vector<std::vector<std::int64_t>> cat_counts;
  std::vector<std::vector<std::int64_t>> group_counts;

  static NodeStats zeros_like(const Dataset& ds);
  static NodeStats of(const Dataset& ds, std::span<const std::int32_t> rows);

  void add_row(const Dataset& ds, std::int32_t row);
  NodeStats& operator+=(const NodeStats& other);
  NodeStats& operator-=(const NodeStats& other);
};

// Weight applied to the categorical term when mixing it with the numerical
// term; rho is the numerical fraction of the feature count.
struct MixedWeight {
  double value = 0.0;
  double rho = 1.0;
  double epsilon = 1e-12;
};

// Sum over numerical features of (sumsq - sum^2/count), each term clamped at
// zero against cancellation. Zero for empty or singleton nodes.
double numerical_sse(const NodeStats& s);

// Sum over categorical features of (count - mode count). Integer-exact.
std::int64_t categorical_mode_loss(const NodeStats& s);

// value = (1-rho) * sse(global) / (rho * mode_loss(global) + epsilon) for
// mixed data; 0 when there are no categorical features; 1 when there are no
// numerical features.
MixedWeight mixed_weight(const NodeStats& global_stats, std::size_t d_num,
                         std::size_t d_cat, double epsilon = 1e-12);

double compactness_loss(const NodeStats& s, const MixedWeight& w);

// Weighted L1 deviation of the node's group distributions from the global
// ones: sum_u w_u * ||G_u(node) - G_u(global)||_1, in [0, 2]. Zero when the
// profile is empty. Empty nodes contribute zero.
double fairness_deviation(const NodeStats& s, const SensitiveProfile& profile);

double node_objective(const NodeStats& s, const MixedWeight& w,
                      const SensitiveProfile& profile, double lambda);

}  // namespace fairtree
