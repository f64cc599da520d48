#include "fairtree/report.hpp"

#include <algorithm>
#include <cstdio>

#include <json.hpp>

namespace fairtree {

RunReport build_report(const ClusteringTree& t, const Dataset& ds,
                       std::span<const std::int32_t> assignments,
                       double fit_seconds) {
  RunReport r;
  r.algorithm = t.algorithm;
  r.k_requested = t.config.k;
  r.k_actual = t.leaf_count();
  if (t.algorithm != "IFCT-P") {
    r.lambda = t.config.lambda;
    r.objective = t.total_compactness + t.config.lambda * t.total_fairness;
  }
  r.n = ds.n;
  r.num_features = ds.num_features;
  r.cat_features = ds.cat_features;
  r.sens_attrs = ds.sens_attrs;
  r.total_compactness = t.total_compactness;
  r.total_fairness = t.total_fairness;
  r.exhausted = t.exhausted;
  r.negative_gain_splits = t.negative_gain_splits;
  r.sens_names = ds.sens_names;
  for (const auto& d : ds.sens_dicts) r.sens_groups.push_back(d.tokens);
  r.fit_seconds = fit_seconds;

  for (std::int32_t leaf_id : t.leaves) {
    const TreeNode& nd = t.nodes[leaf_id];
    LeafSummary ls;
    ls.cluster = nd.cluster;
    ls.n = nd.stats.count;
    ls.compactness = nd.compactness;
    ls.fairness = nd.fairness;
    for (const auto& gc : nd.stats.group_counts) {
      std::vector<double> shares;
      for (std::int64_t c : gc)
        shares.push_back(ls.n > 0 ? static_cast<double>(c) /
                                        static_cast<double>(ls.n)
                                  : 0.0);
      ls.group_shares.push_back(std::move(shares));
    }
    r.leaves.push_back(std::move(ls));
  }
  std::sort(r.leaves.begin(), r.leaves.end(),
            [](const LeafSummary& a, const LeafSummary& b) {
              return a.cluster < b.cluster;
            });

  if (ds.labels) {
    r.acc = accuracy(assignments, *ds.labels);
    r.nmi = nmi(assignments, *ds.labels);
  }
  if (ds.sens_attrs > 0) {
    GroupContingency gc = GroupContingency::from(assignments, ds, r.k_actual);
    r.fairness = fairness_report(gc, t.profile.weights, ds.sens_names);
  }
  return r;
}

std::string to_json(const RunReport& r) {
  using json = nlohmann::ordered_json;
  json j;
  j["algorithm"] = r.algorithm;
  j["k_requested"] = r.k_requested;
  j["k_actual"] = r.k_actual;
  j["lambda"] = r.lambda ? json(*r.lambda) : json(nullptr);
  j["exhausted"] = r.exhausted;
  j["negative_gain_splits"] = r.negative_gain_splits;
  j["data"] = {{"n", r.n},
               {"numerical_features", r.num_features},
               {"categorical_features", r.cat_features},
               {"sensitive_attributes", r.sens_attrs}};
  j["totals"] = {{"compactness", r.total_compactness},
                 {"fairness", r.total_fairness},
                 {"objective", r.objective ? json(*r.objective) : json(nullptr)}};

  json clusters = json::array();
  for (const auto& ls : r.leaves) {
    json c;
    c["cluster"] = ls.cluster;
    c["n"] = ls.n;
    c["compactness"] = ls.compactness;
    c["fairness"] = ls.fairness;
    json groups = json::object();
    for (std::size_t u = 0; u < ls.group_shares.size(); ++u) {
      json shares = json::object();
      for (std::size_t g = 0; g < ls.group_shares[u].size(); ++g)
        shares[r.sens_groups[u][g]] = ls.group_shares[u][g];
      groups[r.sens_names[u]] = std::move(shares);
    }
    c["groups"] = std::move(groups);
    clusters.push_back(std::move(c));
  }
  j["clusters"] = std::move(clusters);

  json metrics;
  metrics["acc"] = r.acc ? json(*r.acc) : json(nullptr);
  metrics["nmi"] = r.nmi ? json(*r.nmi) : json(nullptr);
  json fair;
  json per_attr = json::array();
  for (const auto& a : r.fairness.per_attribute) {
    json e;
    e["attribute"] = a.attribute;
    e["weight"] = a.weight;
    e["bal"] = a.bal ? json(*a.bal) : json(nullptr);
    e["mnce"] = a.mnce ? json(*a.mnce) : json(nullptr);
    if (a.error) e["error"] = *a.error;
    per_attr.push_back(std::move(e));
  }
  fair["per_attribute"] = std::move(per_attr);
  fair["bal_average"] =
      r.fairness.bal_average ? json(*r.fairness.bal_average) : json(nullptr);
  fair["mnce_average"] =
      r.fairness.mnce_average ? json(*r.fairness.mnce_average) : json(nullptr);
  metrics["fairness"] = std::move(fair);
  j["metrics"] = std::move(metrics);

  j["fit_seconds"] = r.fit_seconds;
  return j.dump(2) + "\n";
}

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace

std::string to_text(const RunReport& r) {
  std::string out;
  out += "algorithm: " + r.algorithm + "  k: " + std::to_string(r.k_actual) +
         "/" + std::to_string(r.k_requested);
  if (r.lambda) out += "  lambda: " + fmt("%g", *r.lambda);
  out += "\n";
  out += "n: " + std::to_string(r.n) + "  features: " +
         std::to_string(r.num_features) + " numerical, " +
         std::to_string(r.cat_features) + " categorical  sensitive: " +
         std::to_string(r.sens_attrs) + "\n";
  out += "compactness: " + fmt("%.6g", r.total_compactness) +
         "  fairness: " + fmt("%.6g", r.total_fairness);
  if (r.objective) out += "  objective: " + fmt("%.6g", *r.objective);
  out += "\n";
  out += "fit time: " + fmt("%.3f", r.fit_seconds) + " s\n";
  if (r.exhausted)
    out += "warning: no feasible split remained before reaching the requested "
           "cluster count\n";
  if (r.negative_gain_splits > 0)
    out += "note: " + std::to_string(r.negative_gain_splits) +
           " split(s) had negative gain\n";

  out += "\ncluster        n   compactness     fairness  groups\n";
  for (const auto& ls : r.leaves) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%7d %8lld  %12.6g %12.6g  ", ls.cluster,
                  static_cast<long long>(ls.n), ls.compactness, ls.fairness);
    out += buf;
    for (std::size_t u = 0; u < ls.group_shares.size(); ++u) {
      if (u) out += "; ";
      out += r.sens_names[u] + "=";
      for (std::size_t g = 0; g < ls.group_shares[u].size(); ++g) {
        if (g) out += ",";
        out += r.sens_groups[u][g] + ":" + fmt("%.3f", ls.group_shares[u][g]);
      }
    }
    out += "\n";
  }

  if (r.acc || r.nmi) {
    out += "\nlabels:";
    if (r.acc) out += "  ACC " + fmt("%.4f", *r.acc);
    if (r.nmi) out += "  NMI " + fmt("%.4f", *r.nmi);
    out += "\n";
  }
  if (!r.fairness.per_attribute.empty()) {
    out += "fairness:";
    if (r.fairness.bal_average)
      out += "  BAL " + fmt("%.4f", *r.fairness.bal_average);
    if (r.fairness.mnce_average)
      out += "  MNCE " + fmt("%.4f", *r.fairness.mnce_average);
    out += "\n";
    for (const auto& a : r.fairness.per_attribute) {
      out += "  " + a.attribute + ":";
      if (a.bal) out += "  BAL " + fmt("%.4f", *a.bal);
      if (a.mnce) out += "  MNCE " + fmt("%.4f", *a.mnce);
      if (a.error) out += "  (" + *a.error + ")";
      out += "\n";
    }
  }
  return out;
}

}  // namespace fairtree
