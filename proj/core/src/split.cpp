#include "fairtree/split.hpp"

#include <algorithm>
#include <cmath>

#include "fairtree/error.hpp"

namespace fairtree {

bool SplitRule::routes_left_category(std::int32_t c) const {
  return std::binary_search(left_categories.begin(), left_categories.end(), c);
}

namespace {

// Midpoint that never lands on or above the upper value: a <= t < b keeps
// "v <= t" a proper partition even for adjacent doubles or huge magnitudes.
double split_threshold(double a, double b) {
  double m = a + (b - a) / 2.0;
  if (!std::isfinite(m) || m >= b || m < a) m = a;
  return m;
}

void zero_stats(NodeStats& s) {
  s.count = 0;
  std::fill(s.sum.begin(), s.sum.end(), 0.0);
  std::fill(s.sumsq.begin(), s.sumsq.end(), 0.0);
  for (auto& v : s.cat_counts) std::fill(v.begin(), v.end(), 0);
  for (auto& v : s.group_counts) std::fill(v.begin(), v.end(), 0);
}

// Objectives of both children computed from (parent, left) without
// materializing the right-side statistics.
struct ChildObjectives {
  double left = 0, right = 0;
};

ChildObjectives eval_children(const NodeStats& parent, const NodeStats& left,
                              const MixedWeight& w,
                              const SensitiveProfile& profile, double lambda) {
  ChildObjectives out;
  const double nl = static_cast<double>(left.count);
  const double nr = static_cast<double>(parent.count - left.count);
  for (std::size_t f = 0; f < parent.sum.size(); ++f) {
    double sl = left.sumsq[f] - (left.sum[f] * left.sum[f]) / nl;
    double rs = parent.sum[f] - left.sum[f];
    double sr = (parent.sumsq[f] - left.sumsq[f]) - (rs * rs) / nr;
    out.left += std::max(0.0, sl);
    out.right += std::max(0.0, sr);
  }
  if (w.value != 0.0) {
    std::int64_t model = 0, moder = 0;
    for (std::size_t j = 0; j < parent.cat_counts.size(); ++j) {
      std::int64_t ml = 0, mr = 0;
      const auto& pc = parent.cat_counts[j];
      const auto& lc = left.cat_counts[j];
      for (std::size_t g = 0; g < pc.size(); ++g) {
        ml = std::max(ml, lc[g]);
        mr = std::max(mr, pc[g] - lc[g]);
      }
      model += left.count - ml;
      moder += (parent.count - left.count) - mr;
    }
    out.left += w.value * static_cast<double>(model);
    out.right += w.value * static_cast<double>(moder);
  }
  if (lambda != 0.0 && profile.attr_count() > 0) {
    double fl = 0, fr = 0;
    for (std::size_t u = 0; u < profile.attr_count(); ++u) {
      const auto& global = profile.global[u];
      const auto& pg = parent.group_counts[u];
      const auto& lg = left.group_counts[u];
      double l1l = 0, l1r = 0;
      for (std::size_t g = 0; g < global.size(); ++g) {
        l1l += std::abs(static_cast<double>(lg[g]) / nl - global[g]);
        l1r += std::abs(static_cast<double>(pg[g] - lg[g]) / nr - global[g]);
      }
      fl += profile.weights[u] * l1l;
      fr += profile.weights[u] * l1r;
    }
    out.left += lambda * fl;
    out.right += lambda * fr;
  }
  return out;
}

struct CandidateKey {
  std::int32_t feature = 0;
  int kind_rank = 0;  // 0 numeric, 1 categorical
  std::int64_t order = 0;

  bool operator<(const CandidateKey& o) const {
    if (feature != o.feature) return feature < o.feature;
    if (kind_rank != o.kind_rank) return kind_rank < o.kind_rank;
    return order < o.order;
  }
};

}  // namespace

std::vector<double> numeric_candidates(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    out.push_back(split_threshold(values[i], values[i + 1]));
  }
  return out;
}

std::vector<std::vector<std::int32_t>> categorical_candidates(
    std::vector<std::int32_t> present, std::int32_t cap) {
  if (cap < 2) throw Error("split: categorical cap must be at least 2");
  std::sort(present.begin(), present.end());
  present.erase(std::unique(present.begin(), present.end()), present.end());
  const std::size_t r = present.size();
  std::vector<std::vector<std::int32_t>> out;
  if (r <= 1) return out;
  if (r <= static_cast<std::size_t>(cap)) {
    if (r - 1 >= 31) throw Error("split: categorical cardinality too large to enumerate");
    const std::uint32_t limit = (1u << (r - 1)) - 1u;
    out.reserve(limit);
    for (std::uint32_t mask = 1; mask <= limit; ++mask) {
      std::vector<std::int32_t> subset;
      for (std::size_t i = 0; i + 1 < r; ++i) {
        if (mask & (1u << i)) subset.push_back(present[i]);
      }
      out.push_back(std::move(subset));
    }
  } else {
    out.reserve(r);
    for (std::int32_t c : present) out.push_back({c});
  }
  return out;
}

SplitEvaluation best_rule(const Dataset& ds, std::span<const std::int32_t> rows,
                          const NodeStats& parent, const MixedWeight& w,
                          const SensitiveProfile& profile, double lambda,
                          const SearchParams& params) {
  if (params.n_min < 1) throw Error("split: n_min must be at least 1");
  SplitEvaluation result;
  const std::int64_t n = parent.count;
  if (n < 2 * params.n_min) return result;

  const double parent_obj = node_objective(parent, w, profile, lambda);

  bool has_best = false;
  double best_gain = -std::numeric_limits<double>::infinity();
  CandidateKey best_key;
  SplitRule best;

  auto consider = [&](double gain, const CandidateKey& key, const SplitRule& rule) {
    if (!has_best) {
      has_best = true;
    } else {
      double eps = 1e-9 * std::max({1.0, std::fabs(gain), std::fabs(best_gain)});
      if (gain > best_gain + eps) {
        // strictly better
      } else if (gain >= best_gain - eps && key < best_key) {
        // tie, earlier candidate order wins
      } else {
        return;
      }
    }
    best_gain = gain;
    best_key = key;
    best = rule;
  };

  // Numeric features: one sort per feature, then a prefix scan that
  // accumulates full statistics and evaluates at each distinct-value boundary.
  std::vector<std::int32_t> order(rows.begin(), rows.end());
  NodeStats left = NodeStats::zeros_like(ds);
  for (std::size_t f = 0; f < ds.num_features; ++f) {
    std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
      double va = ds.num_at(static_cast<std::size_t>(a), f);
      double vb = ds.num_at(static_cast<std::size_t>(b), f);
      if (va != vb) return va < vb;
      return a < b;
    });
    zero_stats(left);
    std::int64_t boundary = 0;
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
      left.add_row(ds, order[i]);
      double a = ds.num_at(static_cast<std::size_t>(order[i]), f);
      double b = ds.num_at(static_cast<std::size_t>(order[i + 1]), f);
      if (!(b > a)) continue;
      if (left.count >= params.n_min && n - left.count >= params.n_min) {
        ChildObjectives obj = eval_children(parent, left, w, profile, lambda);
        double gain = parent_obj - obj.left - obj.right;
        SplitRule rule;
        rule.kind = SplitRule::Kind::NumericThreshold;
        rule.feature = static_cast<std::int32_t>(f);
        rule.threshold = split_threshold(a, b);
        consider(gain, {rule.feature, 0, boundary}, rule);
      }
      ++boundary;
    }
  }

  // Categorical features: per-category statistics once, then each candidate
  // subset is the sum of its categories' statistics.
  for (std::size_t j = 0; j < ds.cat_features; ++j) {
    const auto& counts = parent.cat_counts[j];
    std::vector<std::int32_t> present;
    for (std::size_t g = 0; g < counts.size(); ++g) {
      if (counts[g] > 0) present.push_back(static_cast<std::int32_t>(g));
    }
    auto subsets = categorical_candidates(present, params.cat_cap);
    if (subsets.empty()) continue;
    std::vector<NodeStats> by_cat(present.size(), NodeStats::zeros_like(ds));
    std::vector<std::int32_t> pos(counts.size(), -1);
    for (std::size_t i = 0; i < present.size(); ++i) {
      pos[static_cast<std::size_t>(present[i])] = static_cast<std::int32_t>(i);
    }
    for (std::int32_t r : rows) {
      by_cat[static_cast<std::size_t>(
                 pos[static_cast<std::size_t>(ds.cat_at(static_cast<std::size_t>(r), j))])]
          .add_row(ds, r);
    }
    for (std::size_t idx = 0; idx < subsets.size(); ++idx) {
      zero_stats(left);
      for (std::int32_t c : subsets[idx]) {
        left += by_cat[static_cast<std::size_t>(pos[static_cast<std::size_t>(c)])];
      }
      if (left.count < params.n_min || n - left.count < params.n_min) continue;
      ChildObjectives obj = eval_children(parent, left, w, profile, lambda);
      double gain = parent_obj - obj.left - obj.right;
      SplitRule rule;
      rule.kind = SplitRule::Kind::CategorySubset;
      rule.feature = static_cast<std::int32_t>(j);
      rule.left_categories = subsets[idx];
      consider(gain, {rule.feature, 1, static_cast<std::int64_t>(idx)}, rule);
    }
  }

  if (!has_best) return result;

  // Materialize the winner's children from the actual partition.
  result.gain = best_gain;
  result.rule = best;
  result.left_stats = NodeStats::zeros_like(ds);
  result.right_stats = NodeStats::zeros_like(ds);
  for (std::int32_t r : rows) {
    bool goes_left =
        best.kind == SplitRule::Kind::NumericThreshold
            ? best.routes_left_value(
                  ds.num_at(static_cast<std::size_t>(r),
                            static_cast<std::size_t>(best.feature)))
            : best.routes_left_category(
                  ds.cat_at(static_cast<std::size_t>(r),
                            static_cast<std::size_t>(best.feature)));
    (goes_left ? result.left_stats : result.right_stats).add_row(ds, r);
  }
  return result;
}

}  // namespace fairtree
