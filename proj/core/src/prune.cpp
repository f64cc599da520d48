#include "fairtree/prune.hpp"

#include <algorithm>
#include <set>

#include "fairtree/error.hpp"
#include "growth.hpp"

namespace fairtree {

ClusteringTree grow_full(const Dataset& ds, const FitConfig& cfg,
                         PruneState* state) {
  cfg.validate();
  detail::FitView view = detail::make_fit_view(ds, cfg);
  ClusteringTree t = detail::grow_engine(
      ds, view, cfg, /*lambda=*/0.0,
      /*target_leaves=*/std::numeric_limits<std::size_t>::max(), state);
  t.algorithm = "IFCT-P";
  detail::finalize_tree(t, *view.data);
  return t;
}

double prune_gain(const ClusteringTree& t, std::int32_t node_id,
                  const SensitiveProfile& profile) {
  const auto& node = t.nodes.at(static_cast<std::size_t>(node_id));
  if (node.is_leaf()) throw Error("prune_gain: node is a leaf");
  double sum = 0.0;
  std::int64_t count = 0;
  std::vector<std::int32_t> stack{node.left, node.right};
  while (!stack.empty()) {
    std::int32_t id = stack.back();
    stack.pop_back();
    const TreeNode& cur = t.nodes[static_cast<std::size_t>(id)];
    if (cur.is_leaf()) {
      sum += fairness_deviation(cur.stats, profile);
      ++count;
    } else {
      stack.push_back(cur.left);
      stack.push_back(cur.right);
    }
  }
  return sum / static_cast<double>(count) -
         fairness_deviation(node.stats, profile);
}

ClusteringTree fit_ifct_p(const Dataset& ds, const FitConfig& cfg) {
  cfg.validate();
  if (ds.sens_attrs == 0) {
    throw Error("fit: ifct-p requires at least one sensitive attribute");
  }

  PruneState ps;
  ClusteringTree t = grow_full(ds, cfg, &ps);
  const std::int64_t k = static_cast<std::int64_t>(cfg.k);
  if (ps.leaf_count < k) {
    throw Error("fit: insufficient distinct structure for " +
                std::to_string(cfg.k) + " clusters (fully grown tree has " +
                std::to_string(ps.leaf_count) + " leaves)");
  }

  // Candidates ordered by descending prune gain, ties to the smaller id.
  // Keys are erased with the exact value they were inserted with: gains are
  // recomputed only from the bookkeeping arrays, which change exclusively
  // between an erase/insert pair below.
  std::set<std::pair<double, std::int32_t>> order;
  for (std::size_t id = 0; id < t.nodes.size(); ++id) {
    if (ps.is_candidate[id]) {
      order.insert({-ps.gain_of(t, static_cast<std::int32_t>(id)),
                    static_cast<std::int32_t>(id)});
    }
  }

  while (ps.leaf_count > k) {
    if (order.empty()) {
      throw Error("fit: internal pruning invariant violated (no candidates left)");
    }
    auto it = order.begin();
    const std::int32_t id = it->second;
    const std::size_t idx = static_cast<std::size_t>(id);
    if (ps.leaf_count - ps.subtree_leaves[idx] + 1 < k) {
      // Pruning here would overshoot below k; permanently excluded.
      order.erase(it);
      ps.is_candidate[idx] = 0;
      continue;
    }
    order.erase(it);
    ps.is_candidate[idx] = 0;

    // Collapse the subtree: gather leaf samples, drop internal descendants
    // from the candidate set.
    TreeNode& node = t.nodes[idx];
    std::vector<std::int32_t> merged;
    std::vector<std::int32_t> stack{node.left, node.right};
    while (!stack.empty()) {
      std::int32_t cur = stack.back();
      stack.pop_back();
      TreeNode& c = t.nodes[static_cast<std::size_t>(cur)];
      if (c.is_leaf()) {
        merged.insert(merged.end(), c.samples.begin(), c.samples.end());
      } else {
        if (ps.is_candidate[static_cast<std::size_t>(cur)]) {
          order.erase({-ps.gain_of(t, cur), cur});
          ps.is_candidate[static_cast<std::size_t>(cur)] = 0;
        }
        stack.push_back(c.left);
        stack.push_back(c.right);
      }
    }
    std::sort(merged.begin(), merged.end());

    const double old_sum = ps.subtree_fair_sum[idx];
    const std::int64_t old_leaves = ps.subtree_leaves[idx];
    node.rule.reset();
    node.left = node.right = -1;
    node.samples = std::move(merged);
    node.cached = SplitEvaluation{};
    ps.subtree_fair_sum[idx] = node.fairness;
    ps.subtree_leaves[idx] = 1;
    ps.leaf_count -= old_leaves - 1;

    const double d_sum = old_sum - node.fairness;
    const std::int64_t d_leaves = old_leaves - 1;
    for (std::int32_t a = node.parent; a != -1;
         a = t.nodes[static_cast<std::size_t>(a)].parent) {
      const std::size_t ai = static_cast<std::size_t>(a);
      if (ps.is_candidate[ai]) order.erase({-ps.gain_of(t, a), a});
      ps.subtree_fair_sum[ai] -= d_sum;
      ps.subtree_leaves[ai] -= d_leaves;
      if (ps.is_candidate[ai]) order.insert({-ps.gain_of(t, a), a});
    }
  }

  detail::FitView view = detail::make_fit_view(ds, cfg);
  detail::finalize_tree(t, *view.data);
  return t;
}

}  // namespace fairtree
