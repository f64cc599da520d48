#include "fairtree/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fairtree/error.hpp"

namespace fairtree {

namespace {

std::size_t label_range(std::span<const std::int32_t> labels, const char* what) {
  std::int32_t max_id = -1;
  for (std::int32_t v : labels) {
    if (v < 0) throw Error(std::string("metrics: negative ") + what + " id");
    max_id = std::max(max_id, v);
  }
  return static_cast<std::size_t>(max_id + 1);
}

double entropy_counts(std::span<const std::int64_t> counts, std::int64_t total) {
  double h = 0.0;
  for (std::int64_t c : counts) {
    if (c <= 0) continue;
    double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log(p);
  }
  return h;
}

// Kuhn-Munkres with potentials on an n x n integer cost matrix; returns the
// column assigned to each row. O(n^3), exact in int64 arithmetic.
std::vector<int> hungarian_min(const std::vector<std::vector<std::int64_t>>& a) {
  const int n = static_cast<int>(a.size());
  const std::int64_t INF = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> u(n + 1, 0), v(n + 1, 0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), INF);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = -1;
      std::int64_t delta = INF;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        std::int64_t cur = a[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
  }
  return row_to_col;
}

}  // namespace

ContingencyTable ContingencyTable::from_labels(
    std::span<const std::int32_t> pred, std::span<const std::int32_t> truth) {
  if (pred.size() != truth.size() || pred.empty()) {
    throw Error("metrics: prediction and truth lengths must match and be non-empty");
  }
  ContingencyTable ct;
  ct.pred_k = label_range(pred, "cluster");
  ct.true_k = label_range(truth, "class");
  ct.total = static_cast<std::int64_t>(pred.size());
  ct.counts.assign(ct.pred_k * ct.true_k, 0);
  ct.pred_sizes.assign(ct.pred_k, 0);
  ct.true_sizes.assign(ct.true_k, 0);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    ct.counts[static_cast<std::size_t>(pred[i]) * ct.true_k +
              static_cast<std::size_t>(truth[i])]++;
    ct.pred_sizes[static_cast<std::size_t>(pred[i])]++;
    ct.true_sizes[static_cast<std::size_t>(truth[i])]++;
  }
  return ct;
}

GroupContingency GroupContingency::from(std::span<const std::int32_t> pred,
                                        const Dataset& ds, std::size_t k) {
  if (pred.size() != ds.n) throw Error("metrics: prediction length mismatch");
  GroupContingency gc;
  gc.k = std::max(k, label_range(pred, "cluster"));
  gc.cluster_sizes.assign(gc.k, 0);
  for (std::int32_t c : pred) gc.cluster_sizes[static_cast<std::size_t>(c)]++;
  gc.counts.resize(ds.sens_attrs);
  gc.global_groups.resize(ds.sens_attrs);
  for (std::size_t u = 0; u < ds.sens_attrs; ++u) {
    const std::size_t m = static_cast<std::size_t>(ds.sens_dicts[u].size());
    gc.counts[u].assign(gc.k * m, 0);
    gc.global_groups[u].assign(m, 0);
    for (std::size_t i = 0; i < ds.n; ++i) {
      const std::size_t g = static_cast<std::size_t>(ds.sens_at(i, u));
      gc.counts[u][static_cast<std::size_t>(pred[i]) * m + g]++;
      gc.global_groups[u][g]++;
    }
  }
  return gc;
}

double accuracy(std::span<const std::int32_t> pred,
                std::span<const std::int32_t> truth) {
  ContingencyTable ct = ContingencyTable::from_labels(pred, truth);
  const std::size_t n = std::max(ct.pred_k, ct.true_k);
  std::int64_t max_count = 0;
  for (std::int64_t c : ct.counts) max_count = std::max(max_count, c);
  // Zero-padded square cost matrix; minimizing (max - count) maximizes the
  // matched agreement.
  std::vector<std::vector<std::int64_t>> cost(
      n, std::vector<std::int64_t>(n, max_count));
  for (std::size_t i = 0; i < ct.pred_k; ++i) {
    for (std::size_t j = 0; j < ct.true_k; ++j) {
      cost[i][j] = max_count - ct.at(i, j);
    }
  }
  std::vector<int> match = hungarian_min(cost);
  std::int64_t agree = 0;
  for (std::size_t i = 0; i < ct.pred_k; ++i) {
    const int j = match[static_cast<int>(i)];
    if (j >= 0 && static_cast<std::size_t>(j) < ct.true_k) {
      agree += ct.at(i, static_cast<std::size_t>(j));
    }
  }
  return static_cast<double>(agree) / static_cast<double>(ct.total);
}

double nmi(std::span<const std::int32_t> pred,
           std::span<const std::int32_t> truth) {
  ContingencyTable ct = ContingencyTable::from_labels(pred, truth);
  const double hp = entropy_counts(ct.pred_sizes, ct.total);
  const double ht = entropy_counts(ct.true_sizes, ct.total);
  if (hp == 0.0 || ht == 0.0) return 0.0;
  const double n = static_cast<double>(ct.total);
  double mi = 0.0;
  for (std::size_t i = 0; i < ct.pred_k; ++i) {
    for (std::size_t j = 0; j < ct.true_k; ++j) {
      const std::int64_t c = ct.at(i, j);
      if (c <= 0) continue;
      const double pij = static_cast<double>(c) / n;
      mi += pij * std::log(static_cast<double>(c) * n /
                           (static_cast<double>(ct.pred_sizes[i]) *
                            static_cast<double>(ct.true_sizes[j])));
    }
  }
  return std::clamp(2.0 * mi / (hp + ht), 0.0, 1.0);
}

double balance(const GroupContingency& gc, std::size_t attr) {
  if (attr >= gc.counts.size()) throw Error("metrics: attribute index out of range");
  const auto& counts = gc.counts[attr];
  const std::size_t m = gc.global_groups[attr].size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < gc.k; ++i) {
    if (gc.cluster_sizes[i] == 0) throw Error("metrics: empty cluster");
    for (std::size_t g = 0; g < m; ++g) {
      double share = static_cast<double>(counts[i * m + g]) /
                     static_cast<double>(gc.cluster_sizes[i]);
      best = std::min(best, share);
    }
  }
  return best;
}

double mnce(const GroupContingency& gc, std::size_t attr) {
  if (attr >= gc.counts.size()) throw Error("metrics: attribute index out of range");
  const auto& global = gc.global_groups[attr];
  std::int64_t total = 0, nonzero = 0;
  for (std::int64_t c : global) {
    total += c;
    if (c > 0) ++nonzero;
  }
  if (nonzero < 2) {
    throw Error("metrics: global distribution of the attribute has a single group");
  }
  const double hg = entropy_counts(global, total);
  const auto& counts = gc.counts[attr];
  const std::size_t m = global.size();
  double min_h = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < gc.k; ++i) {
    if (gc.cluster_sizes[i] == 0) throw Error("metrics: empty cluster");
    std::span<const std::int64_t> row(counts.data() + i * m, m);
    min_h = std::min(min_h, entropy_counts(row, gc.cluster_sizes[i]));
  }
  return min_h / hg;
}

FairnessReport fairness_report(const GroupContingency& gc,
                               const std::vector<double>& weights,
                               const std::vector<std::string>& names) {
  FairnessReport report;
  double bal_sum = 0, mnce_sum = 0;
  std::size_t ok = 0;
  for (std::size_t u = 0; u < gc.counts.size(); ++u) {
    AttributeFairness row;
    row.attribute = u < names.size() ? names[u] : "attr" + std::to_string(u);
    row.weight = u < weights.size() ? weights[u] : 0.0;
    try {
      row.bal = balance(gc, u);
      row.mnce = mnce(gc, u);
      bal_sum += *row.bal;
      mnce_sum += *row.mnce;
      ++ok;
    } catch (const Error& e) {
      row.bal.reset();
      row.mnce.reset();
      row.error = e.what();
    }
    report.per_attribute.push_back(std::move(row));
  }
  if (ok > 0) {
    report.bal_average = bal_sum / static_cast<double>(ok);
    report.mnce_average = mnce_sum / static_cast<double>(ok);
  }
  return report;
}

}  // namespace fairtree
