#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "fairtree/csv.hpp"
#include "fairtree/schema.hpp"

namespace fairtree {

// Token <-> dense id mapping; ids are assigned in first-appearance order.
struct Dictionary {
  std::vector<std::string> tokens;
  std::unordered_map<std::string, std::int32_t> ids;

  std::int32_t encode(const std::string& token);  // inserts when absent
  std::int32_t find(const std::string& token) const;  // -1 when absent
  const std::string& decode(std::int32_t id) const;
  std::int32_t size() const { return static_cast<std::int32_t>(tokens.size()); }
};

std::uint64_t fnv1a64(const void* data, std::size_t len);

// Column-grouped view of one table: numerical features, categorical features,
// sensitive attributes and the optional label column, each in schema
// declaration order. Group/category ids are dense per column.
struct Dataset {
  std::size_t n = 0;
  std::size_t num_features = 0;
  std::size_t cat_features = 0;
  std::size_t sens_attrs = 0;

  std::vector<double> num;          // n x num_features, row-major
  std::vector<std::int32_t> cat;    // n x cat_features, row-major
  std::vector<std::int32_t> sens;   // n x sens_attrs, row-major
  std::optional<std::vector<std::int32_t>> labels;

  std::vector<Dictionary> cat_dicts;   // one per categorical feature
  std::vector<Dictionary> sens_dicts;  // one per sensitive attribute
  Dictionary label_dict;

  std::vector<std::string> num_names, cat_names, sens_names;
  std::string label_name;
  std::vector<Column> schema_columns;  // original declaration, for snapshots

  std::uint64_t fingerprint = 0;  // hash of the raw ingested bytes

  double num_at(std::size_t row, std::size_t f) const {
    return num[row * num_features + f];
  }
  std::int32_t cat_at(std::size_t row, std::size_t j) const {
    return cat[row * cat_features + j];
  }
  std::int32_t sens_at(std::size_t row, std::size_t u) const {
    return sens[row * sens_attrs + u];
  }

  void validate() const;  // shape and id-range invariants; throws Error
};

Dataset dataset_from_table(const csv::Table& table, const Schema& schema,
                           std::uint64_t fingerprint = 0);
Dataset load_csv(const std::string& path, const Schema& schema);
Dataset load_csv_text(const std::string& text, const Schema& schema);

// Per-numerical-feature affine transform fitted by standardize().
struct FeatureScaling {
  std::vector<double> mean;
  std::vector<double> stddev;  // population std; 1.0 for zero-variance columns

  double apply(double v, std::size_t f) const {
    return (v - mean[f]) / stddev[f];
  }
};

// Mean 0 / variance 1 per numerical feature (population variance);
// zero-variance columns pass through unchanged. Other blocks are untouched.
Dataset standardize(const Dataset& ds, FeatureScaling* out_scaling = nullptr);

// Global sensitive-group distributions plus per-attribute weights.
struct SensitiveProfile {
  std::vector<std::vector<double>> global;  // per attribute: group proportions
  std::vector<double> weights;              // sums to 1 when non-empty

  std::size_t attr_count() const { return global.size(); }
};

// Default weights are uniform 1/U. Supplied weights must have length U and
// non-negative entries with a positive sum; they are renormalized to 1.
SensitiveProfile compute_profile(
    const Dataset& ds,
    const std::optional<std::vector<double>>& weights = std::nullopt);

// 2-D Gaussian blobs (isotropic, given stddev) with one binary sensitive
// attribute drawn Bernoulli(p) per sample and the blob index as label.
// Deterministic for a given seed, independent of platform RNG libraries.
Dataset generate_synthetic(std::size_t n_per_blob,
                           const std::vector<std::array<double, 2>>& centers,
                           double stddev, double p, std::uint64_t seed);

// Serializes a synthetic (or any 2-num + sens + label) dataset back to CSV.
csv::Table dataset_to_table(const Dataset& ds);

}  // namespace fairtree
