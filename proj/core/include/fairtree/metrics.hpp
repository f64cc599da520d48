#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairtree/dataset.hpp"

namespace fairtree {

struct ContingencyTable {
  std::size_t pred_k = 0, true_k = 0;
  std::vector<std::int64_t> counts;  // pred_k x true_k, row-major
  std::vector<std::int64_t> pred_sizes, true_sizes;
  std::int64_t total = 0;

  std::int64_t at(std::size_t i, std::size_t j) const {
    return counts[i * true_k + j];
  }

  static ContingencyTable from_labels(std::span<const std::int32_t> pred,
                                      std::span<const std::int32_t> truth);
};

// Per sensitive attribute: cluster x group counts for a predicted clustering.
struct GroupContingency {
  std::size_t k = 0;
  std::vector<std::vector<std::int64_t>> counts;  // per attr: k x m_u, row-major
  std::vector<std::int64_t> cluster_sizes;
  std::vector<std::vector<std::int64_t>> global_groups;  // per attr: m_u

  static GroupContingency from(std::span<const std::int32_t> pred,
                               const Dataset& ds, std::size_t k);
};

// Fraction of agreeing samples under the best injective cluster-to-class
// assignment (optimal matching on the zero-padded contingency table).
double accuracy(std::span<const std::int32_t> pred,
                std::span<const std::int32_t> truth);

// 2*I(pred;truth) / (H(pred) + H(truth)) with natural logarithms; 0 when
// either entropy is zero.
double nmi(std::span<const std::int32_t> pred,
           std::span<const std::int32_t> truth);

// Smallest per-cluster share of any group of the attribute: min over clusters
// of min over groups of |cluster ∩ group| / |cluster|. In [0, 1/m_u].
double balance(const GroupContingency& gc, std::size_t attr);

// Minimal per-cluster group entropy divided by the global group entropy.
// Errors when the global distribution has fewer than two nonzero groups.
double mnce(const GroupContingency& gc, std::size_t attr);

struct AttributeFairness {
  std::string attribute;
  double weight = 0.0;
  std::optional<double> bal, mnce;
  std::optional<std::string> error;  // set when the attribute is degenerate
};

struct FairnessReport {
  std::vector<AttributeFairness> per_attribute;
  std::optional<double> bal_average, mnce_average;  // unweighted means
};

FairnessReport fairness_report(const GroupContingency& gc,
                               const std::vector<double>& weights,
                               const std::vector<std::string>& names);

}  // namespace fairtree
