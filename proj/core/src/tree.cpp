#include "fairtree/tree.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "fairtree/error.hpp"
#include "growth.hpp"

namespace fairtree {

void FitConfig::validate() const {
  if (k < 1) throw Error("config: k must be at least 1");
  if (!(lambda >= 0) || !std::isfinite(lambda)) {
    throw Error("config: lambda must be finite and non-negative");
  }
  if (n_min < 1) throw Error("config: n_min must be at least 1");
  if (!(epsilon > 0)) throw Error("config: epsilon must be positive");
  if (cat_cap < 2 || cat_cap > 30) {
    throw Error("config: cat_cap must lie in [2, 30]");
  }
  if (weights) {
    for (double w : *weights) {
      if (!(w >= 0) || !std::isfinite(w)) {
        throw Error("config: fairness weights must be finite and non-negative");
      }
    }
  }
}

namespace detail {

FitView make_fit_view(const Dataset& ds, const FitConfig& cfg) {
  FitView view;
  if (cfg.standardize && ds.num_features > 0) {
    FeatureScaling scaling;
    view.owned = standardize(ds, &scaling);
    view.data = &*view.owned;
    view.scaling = scaling;
  } else {
    view.data = &ds;
  }
  return view;
}

namespace {

struct FrontierEntry {
  double gain;
  std::int32_t id;
};

struct FrontierOrder {
  bool operator()(const FrontierEntry& a, const FrontierEntry& b) const {
    if (a.gain != b.gain) return a.gain < b.gain;  // max-heap on gain
    return a.id > b.id;                            // tie: smaller id first
  }
};

}  // namespace

ClusteringTree grow_engine(const Dataset& original, const FitView& view,
                           const FitConfig& cfg, double lambda,
                           std::size_t target_leaves, PruneState* state) {
  const Dataset& ds = *view.data;
  ds.validate();
  cfg.validate();
  if (lambda > 0 && ds.sens_attrs == 0) {
    throw Error("fit: fairness requested (lambda > 0) but the dataset has no "
                "sensitive attributes");
  }

  ClusteringTree t;
  t.config = cfg;
  t.config.lambda = lambda;
  t.profile = compute_profile(ds, cfg.weights);
  t.scaling = view.scaling;
  t.schema_columns = original.schema_columns;
  t.num_names = original.num_names;
  t.cat_names = original.cat_names;
  t.sens_names = original.sens_names;
  t.label_name = original.label_name;
  t.cat_dicts = original.cat_dicts;
  t.sens_dicts = original.sens_dicts;
  t.label_dict = original.label_dict;
  t.dataset_fingerprint = original.fingerprint;

  const SearchParams sp{cfg.n_min, cfg.cat_cap};

  TreeNode root;
  root.id = 0;
  root.samples.resize(ds.n);
  for (std::size_t i = 0; i < ds.n; ++i) {
    root.samples[i] = static_cast<std::int32_t>(i);
  }
  root.stats = NodeStats::of(ds, root.samples);
  t.weight = mixed_weight(root.stats, ds.num_features, ds.cat_features, cfg.epsilon);
  root.fairness = fairness_deviation(root.stats, t.profile);
  root.cached = best_rule(ds, root.samples, root.stats, t.weight, t.profile,
                          lambda, sp);
  t.nodes.push_back(std::move(root));

  std::priority_queue<FrontierEntry, std::vector<FrontierEntry>, FrontierOrder>
      frontier;
  if (t.nodes[0].cached.rule) frontier.push({t.nodes[0].cached.gain, 0});

  std::size_t leaf_count = 1;
  const bool full = target_leaves == std::numeric_limits<std::size_t>::max();
  while (full || leaf_count < target_leaves) {
    if (frontier.empty()) {
      if (!full && leaf_count < target_leaves) t.exhausted = true;
      break;
    }
    const std::int32_t id = frontier.top().id;
    frontier.pop();

    const SplitRule rule = *t.nodes[id].cached.rule;
    const double gain = t.nodes[id].cached.gain;
    if (gain < 0) ++t.negative_gain_splits;

    std::vector<std::int32_t> ls, rs;
    for (std::int32_t r : t.nodes[id].samples) {
      bool goes_left =
          rule.kind == SplitRule::Kind::NumericThreshold
              ? rule.routes_left_value(
                    ds.num_at(static_cast<std::size_t>(r),
                              static_cast<std::size_t>(rule.feature)))
              : rule.routes_left_category(
                    ds.cat_at(static_cast<std::size_t>(r),
                              static_cast<std::size_t>(rule.feature)));
      (goes_left ? ls : rs).push_back(r);
    }

    const std::int32_t lid = static_cast<std::int32_t>(t.nodes.size());
    const std::int32_t rid = lid + 1;
    TreeNode ln, rn;
    ln.id = lid;
    rn.id = rid;
    ln.parent = rn.parent = id;
    ln.samples = std::move(ls);
    rn.samples = std::move(rs);
    ln.stats = std::move(t.nodes[id].cached.left_stats);
    rn.stats = std::move(t.nodes[id].cached.right_stats);
    ln.fairness = fairness_deviation(ln.stats, t.profile);
    rn.fairness = fairness_deviation(rn.stats, t.profile);
    ln.cached = best_rule(ds, ln.samples, ln.stats, t.weight, t.profile, lambda, sp);
    rn.cached = best_rule(ds, rn.samples, rn.stats, t.weight, t.profile, lambda, sp);

    TreeNode& parent = t.nodes[id];
    parent.rule = rule;
    parent.left = lid;
    parent.right = rid;
    parent.samples.clear();
    parent.samples.shrink_to_fit();
    parent.cached = SplitEvaluation{};
    t.split_trace.push_back({id, rule, gain});

    t.nodes.push_back(std::move(ln));
    t.nodes.push_back(std::move(rn));
    if (t.nodes[lid].cached.rule) frontier.push({t.nodes[lid].cached.gain, lid});
    if (t.nodes[rid].cached.rule) frontier.push({t.nodes[rid].cached.gain, rid});
    ++leaf_count;
  }

  if (state) {
    const std::size_t count = t.nodes.size();
    state->is_candidate.assign(count, 0);
    state->subtree_leaves.assign(count, 0);
    state->subtree_fair_sum.assign(count, 0.0);
    state->leaf_count = static_cast<std::int64_t>(leaf_count);
    // Children always carry larger ids than their parent.
    for (std::size_t i = count; i-- > 0;) {
      const TreeNode& node = t.nodes[i];
      if (node.is_leaf()) {
        state->subtree_leaves[i] = 1;
        state->subtree_fair_sum[i] = node.fairness;
      } else {
        state->is_candidate[i] = 1;
        state->subtree_leaves[i] =
            state->subtree_leaves[static_cast<std::size_t>(node.left)] +
            state->subtree_leaves[static_cast<std::size_t>(node.right)];
        state->subtree_fair_sum[i] =
            state->subtree_fair_sum[static_cast<std::size_t>(node.left)] +
            state->subtree_fair_sum[static_cast<std::size_t>(node.right)];
      }
    }
  }
  return t;
}

void finalize_tree(ClusteringTree& t, const Dataset& fit_data) {
  t.leaves.clear();
  std::vector<std::int32_t> stack{t.root};
  while (!stack.empty()) {
    std::int32_t id = stack.back();
    stack.pop_back();
    TreeNode& node = t.nodes[static_cast<std::size_t>(id)];
    if (node.is_leaf()) {
      node.cluster = static_cast<std::int32_t>(t.leaves.size());
      t.leaves.push_back(id);
    } else {
      node.cluster = -1;
      stack.push_back(node.right);
      stack.push_back(node.left);
    }
  }

  t.total_compactness = 0.0;
  t.total_fairness = 0.0;
  for (TreeNode& node : t.nodes) {
    if (!node.is_leaf()) {
      node.compactness = compactness_loss(node.stats, t.weight);
    }
  }
  for (std::int32_t id : t.leaves) {
    TreeNode& leaf = t.nodes[static_cast<std::size_t>(id)];
    // Reported leaf losses use a direct two-pass computation rather than the
    // running sufficient statistics.
    double sse = 0.0;
    const double n = static_cast<double>(leaf.samples.size());
    for (std::size_t f = 0; f < fit_data.num_features; ++f) {
      double mean = 0.0;
      for (std::int32_t r : leaf.samples) {
        mean += fit_data.num_at(static_cast<std::size_t>(r), f);
      }
      mean /= n;
      double ss = 0.0;
      for (std::int32_t r : leaf.samples) {
        double d = fit_data.num_at(static_cast<std::size_t>(r), f) - mean;
        ss += d * d;
      }
      sse += ss;
    }
    leaf.compactness =
        sse + t.weight.value * static_cast<double>(categorical_mode_loss(leaf.stats));
    t.total_compactness += leaf.compactness;
    t.total_fairness += leaf.fairness;
  }
}

}  // namespace detail

ClusteringTree fit_ifct(const Dataset& ds, const FitConfig& cfg) {
  cfg.validate();
  detail::FitView view = detail::make_fit_view(ds, cfg);
  ClusteringTree t =
      detail::grow_engine(ds, view, cfg, cfg.lambda, cfg.k, nullptr);
  t.algorithm = "IFCT";
  detail::finalize_tree(t, *view.data);
  return t;
}

std::int32_t ClusteringTree::route_row(
    std::span<const double> num_values,
    std::span<const std::int32_t> cat_ids) const {
  if (num_values.size() != num_names.size() || cat_ids.size() != cat_names.size()) {
    throw Error("route: feature count mismatch");
  }
  std::int32_t id = root;
  while (true) {
    const TreeNode& node = nodes[static_cast<std::size_t>(id)];
    if (node.is_leaf()) return node.cluster;
    const SplitRule& rule = *node.rule;
    bool left;
    if (rule.kind == SplitRule::Kind::NumericThreshold) {
      double v = num_values[static_cast<std::size_t>(rule.feature)];
      if (scaling) v = scaling->apply(v, static_cast<std::size_t>(rule.feature));
      left = rule.routes_left_value(v);
    } else {
      left = rule.routes_left_category(cat_ids[static_cast<std::size_t>(rule.feature)]);
    }
    id = left ? node.left : node.right;
  }
}

std::int32_t ClusteringTree::route_dataset_row(const Dataset& ds,
                                               std::size_t i) const {
  std::span<const double> numv(ds.num.data() + i * ds.num_features,
                               ds.num_features);
  std::span<const std::int32_t> catv(ds.cat.data() + i * ds.cat_features,
                                     ds.cat_features);
  return route_row(numv, catv);
}

std::vector<std::int32_t> ClusteringTree::assignments(const Dataset& ds) const {
  std::vector<std::int32_t> out(ds.n);
  for (std::size_t i = 0; i < ds.n; ++i) out[i] = route_dataset_row(ds, i);
  return out;
}

}  // namespace fairtree
