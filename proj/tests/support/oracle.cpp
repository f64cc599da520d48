#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "fairtree/error.hpp"

namespace fairtree::oracle {

namespace {

double midpoint(double a, double b) {
  double m = a + (b - a) / 2.0;
  if (!std::isfinite(m) || m >= b || m < a) m = a;
  return m;
}

struct Key {
  std::int32_t feature = 0;
  int kind = 0;  // 0 numeric, 1 categorical
  std::int64_t order = 0;

  bool operator<(const Key& o) const {
    if (feature != o.feature) return feature < o.feature;
    if (kind != o.kind) return kind < o.kind;
    return order < o.order;
  }
};

}  // namespace

double sse(const Dataset& ds, std::span<const std::int32_t> rows) {
  if (rows.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t f = 0; f < ds.num_features; ++f) {
    double mean = 0.0;
    for (std::int32_t r : rows) mean += ds.num_at(static_cast<std::size_t>(r), f);
    mean /= static_cast<double>(rows.size());
    for (std::int32_t r : rows) {
      double d = ds.num_at(static_cast<std::size_t>(r), f) - mean;
      total += d * d;
    }
  }
  return total;
}

std::int64_t mode_loss(const Dataset& ds, std::span<const std::int32_t> rows) {
  std::int64_t total = 0;
  for (std::size_t j = 0; j < ds.cat_features; ++j) {
    std::vector<std::int64_t> counts(
        static_cast<std::size_t>(ds.cat_dicts[j].size()), 0);
    for (std::int32_t r : rows) {
      counts[static_cast<std::size_t>(ds.cat_at(static_cast<std::size_t>(r), j))]++;
    }
    std::int64_t mode = counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end());
    total += static_cast<std::int64_t>(rows.size()) - mode;
  }
  return total;
}

double deviation(const Dataset& ds, std::span<const std::int32_t> rows,
                 const SensitiveProfile& profile) {
  if (rows.empty() || profile.attr_count() == 0) return 0.0;
  double total = 0.0;
  for (std::size_t u = 0; u < profile.attr_count(); ++u) {
    std::vector<std::int64_t> counts(profile.global[u].size(), 0);
    for (std::int32_t r : rows) {
      counts[static_cast<std::size_t>(ds.sens_at(static_cast<std::size_t>(r), u))]++;
    }
    double l1 = 0.0;
    for (std::size_t g = 0; g < counts.size(); ++g) {
      l1 += std::fabs(static_cast<double>(counts[g]) /
                          static_cast<double>(rows.size()) -
                      profile.global[u][g]);
    }
    total += profile.weights[u] * l1;
  }
  return total;
}

double objective(const Dataset& ds, std::span<const std::int32_t> rows,
                 const MixedWeight& w, const SensitiveProfile& profile,
                 double lambda) {
  return sse(ds, rows) + w.value * static_cast<double>(mode_loss(ds, rows)) +
         lambda * deviation(ds, rows, profile);
}

BestSplit best_split(const Dataset& ds, std::span<const std::int32_t> rows,
                     const MixedWeight& w, const SensitiveProfile& profile,
                     double lambda, const SearchParams& params) {
  BestSplit out;
  const auto n = static_cast<std::int64_t>(rows.size());
  if (n < 2 * params.n_min) return out;

  const double parent_obj = objective(ds, rows, w, profile, lambda);

  bool has_best = false;
  double best_gain = -std::numeric_limits<double>::infinity();
  Key best_key;
  SplitRule best;

  auto consider = [&](double gain, const Key& key, const SplitRule& rule) {
    if (has_best) {
      double eps = 1e-9 * std::max({1.0, std::fabs(gain), std::fabs(best_gain)});
      if (gain > best_gain + eps) {
        // strictly better
      } else if (gain >= best_gain - eps && key < best_key) {
        // within the tie window, earlier candidate order wins
      } else {
        return;
      }
    }
    has_best = true;
    best_gain = gain;
    best_key = key;
    best = rule;
  };

  auto evaluate = [&](const std::vector<std::int32_t>& left,
                      const std::vector<std::int32_t>& right, const Key& key,
                      const SplitRule& rule) {
    if (static_cast<std::int64_t>(left.size()) < params.n_min ||
        static_cast<std::int64_t>(right.size()) < params.n_min) {
      return;
    }
    double gain = parent_obj - objective(ds, left, w, profile, lambda) -
                  objective(ds, right, w, profile, lambda);
    consider(gain, key, rule);
  };

  for (std::size_t f = 0; f < ds.num_features; ++f) {
    std::vector<double> values;
    values.reserve(rows.size());
    for (std::int32_t r : rows) values.push_back(ds.num_at(static_cast<std::size_t>(r), f));
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
      SplitRule rule;
      rule.kind = SplitRule::Kind::NumericThreshold;
      rule.feature = static_cast<std::int32_t>(f);
      rule.threshold = midpoint(values[i], values[i + 1]);
      std::vector<std::int32_t> left, right;
      for (std::int32_t r : rows) {
        (ds.num_at(static_cast<std::size_t>(r), f) <= rule.threshold ? left : right)
            .push_back(r);
      }
      evaluate(left, right, {rule.feature, 0, static_cast<std::int64_t>(i)}, rule);
    }
  }

  for (std::size_t j = 0; j < ds.cat_features; ++j) {
    std::vector<std::int32_t> present;
    for (std::int32_t r : rows) present.push_back(ds.cat_at(static_cast<std::size_t>(r), j));
    std::sort(present.begin(), present.end());
    present.erase(std::unique(present.begin(), present.end()), present.end());
    const std::size_t r_j = present.size();
    if (r_j < 2) continue;

    std::vector<std::vector<std::int32_t>> subsets;
    if (r_j <= static_cast<std::size_t>(params.cat_cap)) {
      const std::uint32_t limit = (1u << (r_j - 1)) - 1u;
      for (std::uint32_t mask = 1; mask <= limit; ++mask) {
        std::vector<std::int32_t> subset;
        for (std::size_t i = 0; i + 1 < r_j; ++i) {
          if (mask & (1u << i)) subset.push_back(present[i]);
        }
        subsets.push_back(std::move(subset));
      }
    } else {
      for (std::int32_t c : present) subsets.push_back({c});
    }

    for (std::size_t idx = 0; idx < subsets.size(); ++idx) {
      SplitRule rule;
      rule.kind = SplitRule::Kind::CategorySubset;
      rule.feature = static_cast<std::int32_t>(j);
      rule.left_categories = subsets[idx];
      std::vector<std::int32_t> left, right;
      for (std::int32_t r : rows) {
        std::int32_t c = ds.cat_at(static_cast<std::size_t>(r), j);
        (std::find(subsets[idx].begin(), subsets[idx].end(), c) != subsets[idx].end()
             ? left
             : right)
            .push_back(r);
      }
      evaluate(left, right, {rule.feature, 1, static_cast<std::int64_t>(idx)}, rule);
    }
  }

  if (!has_best) return out;
  out.gain = best_gain;
  out.rule = best;
  return out;
}

double injection_accuracy(std::span<const std::int32_t> pred,
                          std::span<const std::int32_t> truth) {
  if (pred.size() != truth.size() || pred.empty()) {
    throw Error("oracle: accuracy inputs must be equal-length and non-empty");
  }
  std::int32_t kp = 0, kt = 0;
  for (std::int32_t c : pred) kp = std::max(kp, c + 1);
  for (std::int32_t c : truth) kt = std::max(kt, c + 1);
  const std::int32_t K = std::max(kp, kt);

  std::vector<std::int64_t> counts(static_cast<std::size_t>(K) * K, 0);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    counts[static_cast<std::size_t>(pred[i]) * K + static_cast<std::size_t>(truth[i])]++;
  }

  std::vector<std::int32_t> perm(static_cast<std::size_t>(K));
  std::iota(perm.begin(), perm.end(), 0);
  std::int64_t best = 0;
  do {
    std::int64_t agree = 0;
    for (std::int32_t i = 0; i < K; ++i) {
      agree += counts[static_cast<std::size_t>(i) * K +
                      static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
    }
    best = std::max(best, agree);
  } while (std::next_permutation(perm.begin(), perm.end()));

  return static_cast<double>(best) / static_cast<double>(pred.size());
}

}  // namespace fairtree::oracle
