#include "testutil.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fairtree/error.hpp"

namespace fairtree::testutil {

namespace {

// Dictionary holding tokens prefix + "0" .. prefix + (count-1), ids in order.
Dictionary dense_dict(const std::string& prefix, std::int32_t count) {
  Dictionary d;
  for (std::int32_t i = 0; i < count; ++i) d.encode(prefix + std::to_string(i));
  return d;
}

std::int32_t max_id(const std::vector<std::int32_t>& v) {
  return v.empty() ? -1 : *std::max_element(v.begin(), v.end());
}

double next_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
}

}  // namespace

Dataset one_dim(const std::vector<double>& x, const std::vector<std::int32_t>& s) {
  if (x.size() != s.size()) throw Error("testutil: x/s length mismatch");
  Dataset ds;
  ds.n = x.size();
  ds.num_features = 1;
  ds.sens_attrs = 1;
  ds.num = x;
  ds.sens = s;
  ds.num_names = {"x"};
  ds.sens_names = {"s"};
  ds.sens_dicts = {dense_dict("", max_id(s) + 1)};
  ds.schema_columns = {{"x", ColumnRole::Numerical}, {"s", ColumnRole::Sensitive}};
  ds.fingerprint = fnv1a64(ds.num.data(), ds.num.size() * sizeof(double)) ^
                   fnv1a64(ds.sens.data(), ds.sens.size() * sizeof(std::int32_t));
  ds.validate();
  return ds;
}

Dataset one_dim_labeled(const std::vector<double>& x,
                        const std::vector<std::int32_t>& s,
                        const std::vector<std::int32_t>& y) {
  Dataset ds = one_dim(x, s);
  if (y.size() != ds.n) throw Error("testutil: y length mismatch");
  ds.labels = y;
  ds.label_name = "y";
  ds.label_dict = dense_dict("", max_id(y) + 1);
  ds.schema_columns.push_back({"y", ColumnRole::Label});
  ds.validate();
  return ds;
}

Dataset random_dataset(std::mt19937_64& rng, const RandomSpec& spec) {
  Dataset ds;
  ds.n = pick(rng, spec.min_rows, spec.max_rows);
  ds.num_features = pick(rng, spec.min_num, spec.max_num);
  ds.cat_features = pick(rng, spec.min_cat, spec.max_cat);
  if (ds.num_features == 0 && ds.cat_features == 0) ds.num_features = 1;
  ds.sens_attrs = pick(rng, spec.min_sens, spec.max_sens);

  ds.num.resize(ds.n * ds.num_features);
  for (std::size_t f = 0; f < ds.num_features; ++f) {
    bool grid = next_uniform(rng) < spec.grid_prob;
    for (std::size_t i = 0; i < ds.n; ++i) {
      ds.num[i * ds.num_features + f] =
          grid ? static_cast<double>(rng() % 5)
               : -10.0 + 20.0 * next_uniform(rng);
    }
  }

  ds.cat.resize(ds.n * ds.cat_features);
  for (std::size_t j = 0; j < ds.cat_features; ++j) {
    std::int32_t r = 2 + static_cast<std::int32_t>(
                             rng() % static_cast<std::uint64_t>(spec.max_categories - 1));
    ds.cat_dicts.push_back(dense_dict("v", r));
    for (std::size_t i = 0; i < ds.n; ++i) {
      ds.cat[i * ds.cat_features + j] =
          static_cast<std::int32_t>(rng() % static_cast<std::uint64_t>(r));
    }
  }

  ds.sens.resize(ds.n * ds.sens_attrs);
  for (std::size_t u = 0; u < ds.sens_attrs; ++u) {
    std::int32_t g = 2 + static_cast<std::int32_t>(
                             rng() % static_cast<std::uint64_t>(spec.max_groups - 1));
    ds.sens_dicts.push_back(dense_dict("g", g));
    for (std::size_t i = 0; i < ds.n; ++i) {
      ds.sens[i * ds.sens_attrs + u] =
          static_cast<std::int32_t>(rng() % static_cast<std::uint64_t>(g));
    }
  }

  for (std::size_t f = 0; f < ds.num_features; ++f) {
    ds.num_names.push_back("x" + std::to_string(f));
    ds.schema_columns.push_back({ds.num_names.back(), ColumnRole::Numerical});
  }
  for (std::size_t j = 0; j < ds.cat_features; ++j) {
    ds.cat_names.push_back("c" + std::to_string(j));
    ds.schema_columns.push_back({ds.cat_names.back(), ColumnRole::Categorical});
  }
  for (std::size_t u = 0; u < ds.sens_attrs; ++u) {
    ds.sens_names.push_back("s" + std::to_string(u));
    ds.schema_columns.push_back({ds.sens_names.back(), ColumnRole::Sensitive});
  }

  if (spec.with_labels) {
    std::int32_t classes = std::max<std::int32_t>(2, spec.label_classes);
    ds.labels.emplace(ds.n);
    for (std::size_t i = 0; i < ds.n; ++i) {
      (*ds.labels)[i] =
          static_cast<std::int32_t>(rng() % static_cast<std::uint64_t>(classes));
    }
    ds.label_dict = dense_dict("L", classes);
    ds.label_name = "y";
    ds.schema_columns.push_back({"y", ColumnRole::Label});
  }

  ds.fingerprint = rng();
  ds.validate();
  return ds;
}

Dataset two_blobs_skewed(std::size_t n_per_blob, double p0, double p1,
                         double separation, double stddev, std::uint64_t seed) {
  Dataset ds;
  ds.n = 2 * n_per_blob;
  ds.num_features = 2;
  ds.sens_attrs = 1;
  ds.num_names = {"x0", "x1"};
  ds.sens_names = {"group"};
  ds.label_name = "label";
  ds.schema_columns = {{"x0", ColumnRole::Numerical},
                       {"x1", ColumnRole::Numerical},
                       {"group", ColumnRole::Sensitive},
                       {"label", ColumnRole::Label}};
  ds.num.resize(ds.n * 2);
  ds.sens.resize(ds.n);
  ds.labels.emplace(ds.n);
  ds.sens_dicts = {dense_dict("", 2)};
  ds.label_dict = dense_dict("", 2);

  const double centers[2] = {-separation / 2.0, separation / 2.0};
  const double p[2] = {p0, p1};
  std::mt19937_64 rng(seed);
  std::size_t row = 0;
  for (int b = 0; b < 2; ++b) {
    for (std::size_t i = 0; i < n_per_blob; ++i, ++row) {
      double u1 = next_uniform(rng);
      double u2 = next_uniform(rng);
      double r = std::sqrt(-2.0 * std::log(1.0 - u1));
      ds.num[row * 2 + 0] = centers[b] + stddev * r * std::cos(2.0 * M_PI * u2);
      ds.num[row * 2 + 1] = stddev * r * std::sin(2.0 * M_PI * u2);
      ds.sens[row] = next_uniform(rng) < p[b] ? 1 : 0;
      (*ds.labels)[row] = b;
    }
  }
  ds.fingerprint = fnv1a64(ds.num.data(), ds.num.size() * sizeof(double)) ^ seed;
  ds.validate();
  return ds;
}

std::vector<std::int32_t> all_rows(std::size_t n) {
  std::vector<std::int32_t> rows(n);
  std::iota(rows.begin(), rows.end(), 0);
  return rows;
}

}  // namespace fairtree::testutil
