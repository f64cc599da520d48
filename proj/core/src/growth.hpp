#pragma once

// Internal growth engine shared by fit_ifct and the over-expansion phase of
// fit_ifct_p. Not installed.

#include <limits>

#include "fairtree/prune.hpp"
#include "fairtree/tree.hpp"

namespace fairtree::detail {

struct FitView {
  const Dataset* data = nullptr;  // fitting view (standardized when asked)
  std::optional<Dataset> owned;   // storage backing `data` when transformed
  std::optional<FeatureScaling> scaling;
};

FitView make_fit_view(const Dataset& ds, const FitConfig& cfg);

// Best-first growth with the given lambda until `target_leaves` is reached,
// or until no feasible split remains when target_leaves is SIZE_MAX.
ClusteringTree grow_engine(const Dataset& original, const FitView& view,
                           const FitConfig& cfg, double lambda,
                           std::size_t target_leaves, PruneState* state);

// Cluster id assignment (left-to-right depth-first), leaf list, per-node
// reported losses (two-pass for leaves) and totals.
void finalize_tree(ClusteringTree& t, const Dataset& fit_data);

}  // namespace fairtree::detail
