#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "fairtree/losses.hpp"

namespace fairtree {

// Axis-aligned binary routing rule. Numeric: LEFT iff value <= threshold.
// Categorical: LEFT iff the category id is in left_categories (kept sorted).
struct SplitRule {
  enum class Kind { NumericThreshold, CategorySubset };

  Kind kind = Kind::NumericThreshold;
  std::int32_t feature = 0;  // index within the numerical or categorical block
  double threshold = 0.0;
  std::vector<std::int32_t> left_categories;

  bool routes_left_value(double v) const { return v <= threshold; }
  bool routes_left_category(std::int32_t c) const;

  bool operator==(const SplitRule&) const = default;
};

struct SplitEvaluation {
  double gain = -std::numeric_limits<double>::infinity();
  std::optional<SplitRule> rule;  // nullopt: no feasible candidate
  NodeStats left_stats, right_stats;
};

struct SearchParams {
  std::int64_t n_min = 1;
  std::int32_t cat_cap = 12;
};

// Midpoints between consecutive distinct sorted values; degenerate adjacent-
// double pairs fall back to the lower value (<= routing keeps the partition).
std::vector<double> numeric_candidates(std::vector<double> values);

// Candidate left-category subsets over the distinct present ids. Exhaustive
// when |present| <= cap: all non-empty subsets excluding the largest present
// id, in ascending bitmask order over the ascending-sorted present list
// (2^(r-1) - 1 of them, one per unordered partition). One-vs-rest singletons
// in ascending id order otherwise. Empty when fewer than two ids are present.
std::vector<std::vector<std::int32_t>> categorical_candidates(
    std::vector<std::int32_t> present, std::int32_t cap);

// Scans every candidate rule on the node and returns the best by objective
// gain parent - (left + right). Candidates leaving a child below n_min are
// skipped. Gains within 1e-9 relative of each other count as ties, resolved
// by candidate order: lower feature index first, numeric before categorical
// at equal index, then ascending threshold / subset enumeration order.
SplitEvaluation best_rule(const Dataset& ds, std::span<const std::int32_t> rows,
                          const NodeStats& parent, const MixedWeight& w,
                          const SensitiveProfile& profile, double lambda,
                          const SearchParams& params);

}  // namespace fairtree
