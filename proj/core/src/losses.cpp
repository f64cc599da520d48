#include "fairtree/losses.hpp"

#include <algorithm>
#include <cmath>

#include "fairtree/error.hpp"

namespace fairtree {

NodeStats NodeStats::zeros_like(const Dataset& ds) {
  NodeStats s;
  s.sum.assign(ds.num_features, 0.0);
  s.sumsq.assign(ds.num_features, 0.0);
  s.cat_counts.resize(ds.cat_features);
  for (std::size_t j = 0; j < ds.cat_features; ++j) {
    s.cat_counts[j].assign(static_cast<std::size_t>(ds.cat_dicts[j].size()), 0);
  }
  s.group_counts.resize(ds.sens_attrs);
  for (std::size_t u = 0; u < ds.sens_attrs; ++u) {
    s.group_counts[u].assign(static_cast<std::size_t>(ds.sens_dicts[u].size()), 0);
  }
  return s;
}

NodeStats NodeStats::of(const Dataset& ds, std::span<const std::int32_t> rows) {
  NodeStats s = zeros_like(ds);
  for (std::int32_t r : rows) s.add_row(ds, r);
  return s;
}

void NodeStats::add_row(const Dataset& ds, std::int32_t row) {
  ++count;
  const std::size_t i = static_cast<std::size_t>(row);
  for (std::size_t f = 0; f < ds.num_features; ++f) {
    double v = ds.num_at(i, f);
    sum[f] += v;
    sumsq[f] += v * v;
  }
  for (std::size_t j = 0; j < ds.cat_features; ++j) {
    cat_counts[j][static_cast<std::size_t>(ds.cat_at(i, j))]++;
  }
  for (std::size_t u = 0; u < ds.sens_attrs; ++u) {
    group_counts[u][static_cast<std::size_t>(ds.sens_at(i, u))]++;
  }
}

NodeStats& NodeStats::operator+=(const NodeStats& other) {
  count += other.count;
  for (std::size_t f = 0; f < sum.size(); ++f) {
    sum[f] += other.sum[f];
    sumsq[f] += other.sumsq[f];
  }
  for (std::size_t j = 0; j < cat_counts.size(); ++j) {
    for (std::size_t g = 0; g < cat_counts[j].size(); ++g) {
      cat_counts[j][g] += other.cat_counts[j][g];
    }
  }
  for (std::size_t u = 0; u < group_counts.size(); ++u) {
    for (std::size_t g = 0; g < group_counts[u].size(); ++g) {
      group_counts[u][g] += other.group_counts[u][g];
    }
  }
  return *this;
}

NodeStats& NodeStats::operator-=(const NodeStats& other) {
  count -= other.count;
  for (std::size_t f = 0; f < sum.size(); ++f) {
    sum[f] -= other.sum[f];
    sumsq[f] -= other.sumsq[f];
  }
  for (std::size_t j = 0; j < cat_counts.size(); ++j) {
    for (std::size_t g = 0; g < cat_counts[j].size(); ++g) {
      cat_counts[j][g] -= other.cat_counts[j][g];
    }
  }
  for (std::size_t u = 0; u < group_counts.size(); ++u) {
    for (std::size_t g = 0; g < group_counts[u].size(); ++g) {
      group_counts[u][g] -= other.group_counts[u][g];
    }
  }
  return *this;
}

double numerical_sse(const NodeStats& s) {
  if (s.count <= 0) return 0.0;
  const double n = static_cast<double>(s.count);
  double total = 0.0;
  for (std::size_t f = 0; f < s.sum.size(); ++f) {
    double sse = s.sumsq[f] - (s.sum[f] * s.sum[f]) / n;
    total += std::max(0.0, sse);
  }
  return total;
}

std::int64_t categorical_mode_loss(const NodeStats& s) {
  std::int64_t total = 0;
  for (const auto& counts : s.cat_counts) {
    std::int64_t mode = 0;
    for (std::int64_t c : counts) mode = std::max(mode, c);
    total += s.count - mode;
  }
  return total;
}

MixedWeight mixed_weight(const NodeStats& global_stats, std::size_t d_num,
                         std::size_t d_cat, double epsilon) {
  MixedWeight w;
  w.epsilon = epsilon;
  if (d_num + d_cat == 0) throw Error("mixed_weight: no features");
  w.rho = static_cast<double>(d_num) / static_cast<double>(d_num + d_cat);
  if (d_cat == 0) {
    w.value = 0.0;
  } else if (d_num == 0) {
    w.value = 1.0;
  } else {
    double ln = numerical_sse(global_stats);
    double lc = static_cast<double>(categorical_mode_loss(global_stats));
    w.value = (1.0 - w.rho) * ln / (w.rho * lc + epsilon);
  }
  return w;
}

double compactness_loss(const NodeStats& s, const MixedWeight& w) {
  return numerical_sse(s) +
         w.value * static_cast<double>(categorical_mode_loss(s));
}

double fairness_deviation(const NodeStats& s, const SensitiveProfile& profile) {
  if (profile.attr_count() == 0 || s.count <= 0) return 0.0;
  const double n = static_cast<double>(s.count);
  double total = 0.0;
  for (std::size_t u = 0; u < profile.attr_count(); ++u) {
    double l1 = 0.0;
    const auto& global = profile.global[u];
    const auto& counts = s.group_counts[u];
    for (std::size_t g = 0; g < global.size(); ++g) {
      l1 += std::abs(static_cast<double>(counts[g]) / n - global[g]);
    }
    total += profile.weights[u] * l1;
  }
  return total;
}

double node_objective(const NodeStats& s, const MixedWeight& w,
                      const SensitiveProfile& profile, double lambda) {
  return compactness_loss(s, w) + lambda * fairness_deviation(s, profile);
}

}  // namespace fairtree
