#pragma once

#include "fairtree/tree.hpp"

namespace fairtree {

// Bookkeeping for fairness-guided post-pruning. Indexed by node id.
struct PruneState {
  std::vector<char> is_candidate;            // prunable internal nodes
  std::vector<std::int64_t> subtree_leaves;  // leaves under each node
  std::vector<double> subtree_fair_sum;      // sum of leaf deviations under it
  std::int64_t leaf_count = 0;

  double gain_of(const ClusteringTree& t, std::int32_t id) const {
    return subtree_fair_sum[static_cast<std::size_t>(id)] /
               static_cast<double>(subtree_leaves[static_cast<std::size_t>(id)]) -
           t.nodes[static_cast<std::size_t>(id)].fairness;
  }
};

// Compactness-only best-first growth (no fairness term) until no leaf has a
// feasible rule. With n_min = 1 every leaf ends pure or singleton. Every
// split parent becomes a prune candidate in `state`.
ClusteringTree grow_full(const Dataset& ds, const FitConfig& cfg,
                         PruneState* state = nullptr);

// Mean leaf deviation under the node minus the node's own deviation,
// recomputed from the tree (used to cross-check the incremental bookkeeping).
double prune_gain(const ClusteringTree& t, std::int32_t node_id,
                  const SensitiveProfile& profile);

// Over-expansion followed by fairness-guided pruning: repeatedly collapses
// the candidate with the largest prune gain (ties to the smaller node id),
// permanently excluding candidates whose removal would drop below k leaves,
// until exactly k leaves remain. Errors when the fully grown tree has fewer
// than k leaves.
ClusteringTree fit_ifct_p(const Dataset& ds, const FitConfig& cfg);

}  // namespace fairtree
