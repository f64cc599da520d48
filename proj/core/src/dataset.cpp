#include "fairtree/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <random>

#include "fairtree/error.hpp"

namespace fairtree {

std::int32_t Dictionary::encode(const std::string& token) {
  auto it = ids.find(token);
  if (it != ids.end()) return it->second;
  std::int32_t id = static_cast<std::int32_t>(tokens.size());
  tokens.push_back(token);
  ids.emplace(token, id);
  return id;
}

std::int32_t Dictionary::find(const std::string& token) const {
  auto it = ids.find(token);
  return it == ids.end() ? -1 : it->second;
}

const std::string& Dictionary::decode(std::int32_t id) const {
  if (id < 0 || id >= size()) throw Error("dictionary: id out of range");
  return tokens[static_cast<std::size_t>(id)];
}

std::uint64_t fnv1a64(const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 14695981039346656037ULL;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

void Dataset::validate() const {
  if (n == 0) throw Error("dataset: no rows");
  if (num.size() != n * num_features) throw Error("dataset: numeric block shape");
  if (cat.size() != n * cat_features) throw Error("dataset: categorical block shape");
  if (sens.size() != n * sens_attrs) throw Error("dataset: sensitive block shape");
  if (labels && labels->size() != n) throw Error("dataset: label length");
  if (cat_dicts.size() != cat_features || cat_names.size() != cat_features) {
    throw Error("dataset: categorical metadata shape");
  }
  if (sens_dicts.size() != sens_attrs || sens_names.size() != sens_attrs) {
    throw Error("dataset: sensitive metadata shape");
  }
  if (num_names.size() != num_features) throw Error("dataset: numeric names shape");
  for (double v : num) {
    if (!std::isfinite(v)) throw Error("dataset: non-finite numeric value");
  }
  for (std::size_t j = 0; j < cat_features; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      std::int32_t id = cat_at(i, j);
      if (id < 0 || id >= cat_dicts[j].size()) {
        throw Error("dataset: categorical id out of range in \"" + cat_names[j] + "\"");
      }
    }
  }
  for (std::size_t u = 0; u < sens_attrs; ++u) {
    for (std::size_t i = 0; i < n; ++i) {
      std::int32_t id = sens_at(i, u);
      if (id < 0 || id >= sens_dicts[u].size()) {
        throw Error("dataset: group id out of range in \"" + sens_names[u] + "\"");
      }
    }
  }
  if (labels) {
    for (std::int32_t id : *labels) {
      if (id < 0 || id >= label_dict.size()) throw Error("dataset: label id out of range");
    }
  }
}

Dataset dataset_from_table(const csv::Table& table, const Schema& schema,
                           std::uint64_t fingerprint) {
  schema.validate();
  if (table.rows.empty()) throw Error("dataset: no data rows");

  // The header must carry exactly the schema's columns (any order).
  std::unordered_map<std::string, std::size_t> header_pos;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (!header_pos.emplace(table.header[i], i).second) {
      throw Error("dataset: duplicate header column \"" + table.header[i] + "\"");
    }
  }
  if (table.header.size() != schema.columns.size()) {
    throw Error("dataset: header has " + std::to_string(table.header.size()) +
                " columns, schema declares " + std::to_string(schema.columns.size()));
  }

  Dataset ds;
  ds.n = table.rows.size();
  ds.schema_columns = schema.columns;
  ds.fingerprint = fingerprint;

  struct Source {
    ColumnRole role;
    std::size_t table_col;
    std::size_t block_index;  // index within its role block
    std::string name;
  };
  std::vector<Source> sources;
  for (const auto& col : schema.columns) {
    auto it = header_pos.find(col.name);
    if (it == header_pos.end()) {
      throw Error("dataset: schema column \"" + col.name + "\" missing from CSV header");
    }
    if (col.role == ColumnRole::Ignore) continue;
    Source src{col.role, it->second, 0, col.name};
    switch (col.role) {
      case ColumnRole::Numerical:
        src.block_index = ds.num_features++;
        ds.num_names.push_back(col.name);
        break;
      case ColumnRole::Categorical:
        src.block_index = ds.cat_features++;
        ds.cat_names.push_back(col.name);
        break;
      case ColumnRole::Sensitive:
        src.block_index = ds.sens_attrs++;
        ds.sens_names.push_back(col.name);
        break;
      case ColumnRole::Label:
        ds.label_name = col.name;
        break;
      case ColumnRole::Ignore:
        break;
    }
    sources.push_back(src);
  }

  ds.num.resize(ds.n * ds.num_features);
  ds.cat.resize(ds.n * ds.cat_features);
  ds.sens.resize(ds.n * ds.sens_attrs);
  ds.cat_dicts.resize(ds.cat_features);
  ds.sens_dicts.resize(ds.sens_attrs);
  if (!ds.label_name.empty()) ds.labels.emplace(ds.n);

  for (std::size_t i = 0; i < ds.n; ++i) {
    const auto& row = table.rows[i];
    for (const auto& src : sources) {
      const std::string& cell = row[src.table_col];
      if (cell.empty()) {
        throw Error("dataset: missing value at row " + std::to_string(i + 1) +
                    ", column \"" + src.name + "\"");
      }
      switch (src.role) {
        case ColumnRole::Numerical: {
          double v = 0;
          auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
          if (ec != std::errc() || ptr != cell.data() + cell.size()) {
            throw Error("dataset: cannot parse \"" + cell + "\" as a number at row " +
                        std::to_string(i + 1) + ", column \"" + src.name + "\"");
          }
          if (!std::isfinite(v)) {
            throw Error("dataset: non-finite value at row " + std::to_string(i + 1) +
                        ", column \"" + src.name + "\"");
          }
          ds.num[i * ds.num_features + src.block_index] = v;
          break;
        }
        case ColumnRole::Categorical:
          ds.cat[i * ds.cat_features + src.block_index] =
              ds.cat_dicts[src.block_index].encode(cell);
          break;
        case ColumnRole::Sensitive:
          ds.sens[i * ds.sens_attrs + src.block_index] =
              ds.sens_dicts[src.block_index].encode(cell);
          break;
        case ColumnRole::Label:
          (*ds.labels)[i] = ds.label_dict.encode(cell);
          break;
        case ColumnRole::Ignore:
          break;
      }
    }
  }
  ds.validate();
  return ds;
}

Dataset load_csv(const std::string& path, const Schema& schema) {
  std::string raw;
  csv::Table table = csv::parse_file(path, &raw);
  return dataset_from_table(table, schema, fnv1a64(raw.data(), raw.size()));
}

Dataset load_csv_text(const std::string& text, const Schema& schema) {
  return dataset_from_table(csv::parse(text), schema,
                            fnv1a64(text.data(), text.size()));
}

Dataset standardize(const Dataset& ds, FeatureScaling* out_scaling) {
  Dataset out = ds;
  FeatureScaling scaling;
  scaling.mean.assign(ds.num_features, 0.0);
  scaling.stddev.assign(ds.num_features, 1.0);
  for (std::size_t f = 0; f < ds.num_features; ++f) {
    double sum = 0;
    for (std::size_t i = 0; i < ds.n; ++i) sum += ds.num_at(i, f);
    double mean = sum / static_cast<double>(ds.n);
    double ss = 0;
    for (std::size_t i = 0; i < ds.n; ++i) {
      double d = ds.num_at(i, f) - mean;
      ss += d * d;
    }
    double var = ss / static_cast<double>(ds.n);
    if (var > 0) {
      scaling.mean[f] = mean;
      scaling.stddev[f] = std::sqrt(var);
    }
    for (std::size_t i = 0; i < ds.n; ++i) {
      out.num[i * ds.num_features + f] = scaling.apply(ds.num_at(i, f), f);
    }
  }
  if (out_scaling) *out_scaling = scaling;
  return out;
}

SensitiveProfile compute_profile(const Dataset& ds,
                                 const std::optional<std::vector<double>>& weights) {
  SensitiveProfile p;
  const std::size_t U = ds.sens_attrs;
  if (U == 0) {
    if (weights && !weights->empty()) {
      throw Error("profile: weights given but the dataset has no sensitive attributes");
    }
    return p;
  }
  p.global.resize(U);
  for (std::size_t u = 0; u < U; ++u) {
    std::vector<std::int64_t> counts(ds.sens_dicts[u].size(), 0);
    for (std::size_t i = 0; i < ds.n; ++i) counts[ds.sens_at(i, u)]++;
    p.global[u].resize(counts.size());
    for (std::size_t g = 0; g < counts.size(); ++g) {
      p.global[u][g] = static_cast<double>(counts[g]) / static_cast<double>(ds.n);
    }
  }
  if (weights) {
    if (weights->size() != U) {
      throw Error("profile: expected " + std::to_string(U) + " weights, got " +
                  std::to_string(weights->size()));
    }
    double total = 0;
    for (double w : *weights) {
      if (!(w >= 0)) throw Error("profile: weights must be non-negative");
      total += w;
    }
    if (!(total > 0)) throw Error("profile: weights must have a positive sum");
    p.weights.resize(U);
    for (std::size_t u = 0; u < U; ++u) p.weights[u] = (*weights)[u] / total;
  } else {
    p.weights.assign(U, 1.0 / static_cast<double>(U));
  }
  return p;
}

namespace {

// Explicit uniform/normal transforms keep generated bytes identical across
// standard libraries; mt19937_64 itself is fully specified.
double next_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

Dataset generate_synthetic(std::size_t n_per_blob,
                           const std::vector<std::array<double, 2>>& centers,
                           double stddev, double p, std::uint64_t seed) {
  if (n_per_blob == 0) throw Error("synthetic: n_per_blob must be positive");
  if (centers.empty()) throw Error("synthetic: at least one blob center required");
  if (!(stddev > 0)) throw Error("synthetic: stddev must be positive");
  if (!(p >= 0.0 && p <= 1.0)) throw Error("synthetic: p must lie in [0, 1]");

  Dataset ds;
  ds.n = n_per_blob * centers.size();
  ds.num_features = 2;
  ds.cat_features = 0;
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
  ds.sens_dicts.resize(1);
  ds.sens_dicts[0].encode("0");
  ds.sens_dicts[0].encode("1");
  for (std::size_t b = 0; b < centers.size(); ++b) {
    ds.label_dict.encode(std::to_string(b));
  }

  std::mt19937_64 rng(seed);
  std::size_t row = 0;
  for (std::size_t b = 0; b < centers.size(); ++b) {
    for (std::size_t s = 0; s < n_per_blob; ++s, ++row) {
      double u1 = next_uniform(rng);
      double u2 = next_uniform(rng);
      double r = std::sqrt(-2.0 * std::log(1.0 - u1));
      double z0 = r * std::cos(2.0 * M_PI * u2);
      double z1 = r * std::sin(2.0 * M_PI * u2);
      ds.num[row * 2 + 0] = centers[b][0] + stddev * z0;
      ds.num[row * 2 + 1] = centers[b][1] + stddev * z1;
      ds.sens[row] = next_uniform(rng) < p ? 1 : 0;
      (*ds.labels)[row] = static_cast<std::int32_t>(b);
    }
  }

  // Fingerprint the generated content so provenance distinguishes seeds.
  std::uint64_t h = fnv1a64(ds.num.data(), ds.num.size() * sizeof(double));
  h ^= fnv1a64(ds.sens.data(), ds.sens.size() * sizeof(std::int32_t));
  h ^= fnv1a64(&seed, sizeof(seed));
  ds.fingerprint = h;
  ds.validate();
  return ds;
}

csv::Table dataset_to_table(const Dataset& ds) {
  csv::Table t;
  struct Emit {
    ColumnRole role;
    std::size_t block_index;
  };
  std::vector<Emit> emits;
  std::size_t nf = 0, cf = 0, sf = 0;
  for (const auto& col : ds.schema_columns) {
    if (col.role == ColumnRole::Ignore) continue;
    t.header.push_back(col.name);
    switch (col.role) {
      case ColumnRole::Numerical: emits.push_back({col.role, nf++}); break;
      case ColumnRole::Categorical: emits.push_back({col.role, cf++}); break;
      case ColumnRole::Sensitive: emits.push_back({col.role, sf++}); break;
      case ColumnRole::Label: emits.push_back({col.role, 0}); break;
      case ColumnRole::Ignore: break;
    }
  }
  t.rows.resize(ds.n);
  for (std::size_t i = 0; i < ds.n; ++i) {
    auto& row = t.rows[i];
    row.reserve(emits.size());
    for (const auto& e : emits) {
      switch (e.role) {
        case ColumnRole::Numerical:
          row.push_back(csv::format_double(ds.num_at(i, e.block_index)));
          break;
        case ColumnRole::Categorical:
          row.push_back(ds.cat_dicts[e.block_index].decode(ds.cat_at(i, e.block_index)));
          break;
        case ColumnRole::Sensitive:
          row.push_back(ds.sens_dicts[e.block_index].decode(ds.sens_at(i, e.block_index)));
          break;
        case ColumnRole::Label:
          row.push_back(ds.label_dict.decode((*ds.labels)[i]));
          break;
        case ColumnRole::Ignore:
          break;
      }
    }
  }
  return t;
}

}  // namespace fairtree
