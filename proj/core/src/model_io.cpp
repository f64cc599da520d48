#include "fairtree/model_io.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "fairtree/error.hpp"

namespace fairtree {
namespace {

using nlohmann::json;

// Canonical emitter: fixed key order, shortest round-trip decimals, no
// whitespace. Equal documents produce equal bytes.
class JsonWriter {
 public:
  std::string out;

  void begin_object() {
    separate(true);
    out += '{';
    stack_.push_back({/*is_array=*/false, /*first=*/true});
  }
  void end_object() {
    out += '}';
    stack_.pop_back();
  }
  void begin_array() {
    separate(true);
    out += '[';
    stack_.push_back({/*is_array=*/true, /*first=*/true});
  }
  void end_array() {
    out += ']';
    stack_.pop_back();
  }
  void key(std::string_view k) {
    separate(false);
    write_string(k);
    out += ':';
  }
  void value(std::string_view s) {
    separate(true);
    write_string(s);
  }
  // A bare literal would otherwise prefer the bool overload.
  void value(const char* s) { value(std::string_view(s)); }
  void value(double v) {
    separate(true);
    // 17 significant digits: enough to reconstruct the exact double.
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
  }
  void value(std::int64_t v) {
    separate(true);
    out += std::to_string(v);
  }
  void value(std::int32_t v) { value(static_cast<std::int64_t>(v)); }
  void value(bool b) {
    separate(true);
    out += b ? "true" : "false";
  }
  void null() {
    separate(true);
    out += "null";
  }

 private:
  struct Frame {
    bool is_array;
    bool first;
  };
  std::vector<Frame> stack_;

  // In an object, the comma is owed at the key; the value that follows the
  // key must not add another one.
  void separate(bool is_value) {
    if (stack_.empty()) return;
    Frame& f = stack_.back();
    if (is_value && !f.is_array) return;
    if (f.first)
      f.first = false;
    else
      out += ',';
  }

  void write_string(std::string_view s) {
    out += '"';
    for (unsigned char c : s) {
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\b': out += "\\b"; break;
        case '\f': out += "\\f"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
          if (c < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", c);
            out += buf;
          } else {
            out += static_cast<char>(c);
          }
      }
    }
    out += '"';
  }
};

std::string provenance_timestamp() {
  std::time_t t = std::time(nullptr);
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
    errno = 0;
    char* end = nullptr;
    long long v = std::strtoll(env, &end, 10);
    if (end != env && end && *end == '\0' && errno == 0)
      t = static_cast<std::time_t>(v);
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string fingerprint_string(std::uint64_t fp) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                static_cast<unsigned long long>(fp));
  return buf;
}

void write_string_array(JsonWriter& w, const std::vector<std::string>& v) {
  w.begin_array();
  for (const auto& s : v) w.value(s);
  w.end_array();
}

[[noreturn]] void fail(const std::string& msg) {
  throw Error("invalid model document: " + msg);
}

const json& member(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) fail(std::string("missing field '") + key + "'");
  return *it;
}

double as_finite(const json& j, const char* what) {
  if (!j.is_number()) fail(std::string(what) + " must be a number");
  double v = j.get<double>();
  if (!std::isfinite(v)) fail(std::string(what) + " must be finite");
  return v;
}

std::int64_t as_int(const json& j, const char* what) {
  if (!j.is_number_integer()) fail(std::string(what) + " must be an integer");
  return j.get<std::int64_t>();
}

std::string as_string(const json& j, const char* what) {
  if (!j.is_string()) fail(std::string(what) + " must be a string");
  return j.get<std::string>();
}

std::vector<std::vector<std::string>> as_dicts(const json& j,
                                               const char* what) {
  if (!j.is_array()) fail(std::string(what) + " must be an array");
  std::vector<std::vector<std::string>> out;
  for (const auto& d : j) {
    if (!d.is_array()) fail(std::string(what) + " entries must be arrays");
    std::vector<std::string> tokens;
    for (const auto& t : d) tokens.push_back(as_string(t, what));
    out.push_back(std::move(tokens));
  }
  return out;
}

}  // namespace

void ModelDocument::finish() {
  num_names.clear();
  cat_names.clear();
  sens_names.clear();
  label_name.clear();
  for (const auto& c : schema_columns) {
    switch (c.role) {
      case ColumnRole::Numerical: num_names.push_back(c.name); break;
      case ColumnRole::Categorical: cat_names.push_back(c.name); break;
      case ColumnRole::Sensitive: sens_names.push_back(c.name); break;
      case ColumnRole::Label: label_name = c.name; break;
      case ColumnRole::Ignore: break;
    }
  }
  if (cat_names.size() != cat_dicts.size())
    fail("categorical dictionary count does not match the schema");
  if (sens_names.size() != sens_dicts.size())
    fail("sensitive dictionary count does not match the schema");
  if (scaling && scaling->mean.size() != num_names.size())
    fail("scaling entry count does not match the numerical feature count");
  if (config.weights && config.weights->size() != sens_names.size())
    fail("weight count does not match the sensitive attribute count");

  index_of.clear();
  index_of.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!index_of.emplace(nodes[i].id, i).second)
      fail("duplicate node id " + std::to_string(nodes[i].id));
  }
  if (nodes.empty()) fail("empty node list");
  if (!index_of.count(root)) fail("root id is not a node");

  std::vector<int> referenced(nodes.size(), 0);
  for (const auto& nd : nodes) {
    if (nd.is_leaf()) {
      if (nd.cluster < 0) fail("leaf without a cluster id");
      if (nd.left != -1 || nd.right != -1) fail("leaf with children");
    } else {
      for (std::int32_t child : {nd.left, nd.right}) {
        auto it = index_of.find(child);
        if (it == index_of.end())
          fail("node " + std::to_string(nd.id) + " references missing child " +
               std::to_string(child));
        if (child == nd.id) fail("node is its own child");
        ++referenced[it->second];
      }
      const SplitRule& r = *nd.rule;
      if (r.kind == SplitRule::Kind::NumericThreshold) {
        if (r.feature < 0 ||
            static_cast<std::size_t>(r.feature) >= num_names.size())
          fail("rule feature index out of range");
        if (!std::isfinite(r.threshold)) fail("rule threshold must be finite");
      } else {
        if (r.feature < 0 ||
            static_cast<std::size_t>(r.feature) >= cat_names.size())
          fail("rule feature index out of range");
        if (r.left_categories.empty()) fail("empty category subset");
        std::int64_t dict_size =
            static_cast<std::int64_t>(cat_dicts[r.feature].size());
        for (std::size_t i = 0; i < r.left_categories.size(); ++i) {
          std::int32_t c = r.left_categories[i];
          if (c < 0 || c >= dict_size) fail("category id out of range");
          if (i > 0 && r.left_categories[i - 1] >= c)
            fail("category subset must be sorted and distinct");
        }
      }
    }
    if (nd.n < 0) fail("negative node size");
    if (nd.group_counts.size() != sens_names.size())
      fail("group count shape does not match the sensitive attributes");
    for (std::size_t u = 0; u < nd.group_counts.size(); ++u)
      if (nd.group_counts[u].size() != sens_dicts[u].size())
        fail("group count shape does not match dictionary sizes");
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    bool is_root = nodes[i].id == root;
    if (is_root && referenced[i] != 0) fail("root is referenced as a child");
    if (!is_root && referenced[i] != 1)
      fail("node " + std::to_string(nodes[i].id) +
           " must be referenced exactly once");
  }

  // Single parent everywhere plus one root rules out shared structure; a
  // traversal that covers every node then rules out detached cycles.
  std::vector<std::int32_t> stack{root};
  std::size_t seen = 0;
  std::vector<std::int32_t> clusters;
  while (!stack.empty()) {
    const ModelNode& nd = nodes[index_of.at(stack.back())];
    stack.pop_back();
    ++seen;
    if (nd.is_leaf()) {
      clusters.push_back(nd.cluster);
    } else {
      stack.push_back(nd.right);
      stack.push_back(nd.left);
    }
  }
  if (seen != nodes.size()) fail("unreachable nodes present");
  std::sort(clusters.begin(), clusters.end());
  for (std::size_t i = 0; i < clusters.size(); ++i)
    if (clusters[i] != static_cast<std::int32_t>(i))
      fail("cluster ids must cover 0..k-1 exactly once");
}

std::int32_t ModelDocument::route(std::span<const double> num_values,
                                  std::span<const std::int32_t> cat_ids) const {
  if (num_values.size() != num_names.size() ||
      cat_ids.size() != cat_names.size())
    throw Error("feature vector shape does not match the model");
  const ModelNode* nd = &nodes[index_of.at(root)];
  while (!nd->is_leaf()) {
    const SplitRule& r = *nd->rule;
    bool left;
    if (r.kind == SplitRule::Kind::NumericThreshold) {
      double v = num_values[r.feature];
      if (scaling) v = scaling->apply(v, r.feature);
      left = r.routes_left_value(v);
    } else {
      left = r.routes_left_category(cat_ids[r.feature]);
    }
    nd = &nodes[index_of.at(left ? nd->left : nd->right)];
  }
  return nd->cluster;
}

std::size_t ModelDocument::leaf_count() const {
  std::size_t c = 0;
  for (const auto& nd : nodes) c += nd.is_leaf() ? 1 : 0;
  return c;
}

ModelDocument build_document(const ClusteringTree& t) {
  ModelDocument doc;
  doc.algorithm = t.algorithm;
  doc.config = t.config;
  doc.lambda_set = t.algorithm != "IFCT-P";
  doc.schema_columns = t.schema_columns;
  doc.scaling = t.scaling;
  for (const auto& d : t.cat_dicts) doc.cat_dicts.push_back(d.tokens);
  for (const auto& d : t.sens_dicts) doc.sens_dicts.push_back(d.tokens);
  doc.label_tokens = t.label_dict.tokens;
  doc.root = t.root;
  doc.total_compactness = t.total_compactness;
  doc.total_fairness = t.total_fairness;
  doc.exhausted = t.exhausted;
  doc.negative_gain_splits = t.negative_gain_splits;
  doc.created_at = provenance_timestamp();
  doc.dataset_fingerprint = fingerprint_string(t.dataset_fingerprint);

  // Pruning leaves orphaned entries in the node vector; only what the root
  // still reaches belongs in the document. Ascending id is creation order.
  std::vector<std::int32_t> keep;
  std::vector<std::int32_t> stack{t.root};
  while (!stack.empty()) {
    std::int32_t id = stack.back();
    stack.pop_back();
    keep.push_back(id);
    const TreeNode& nd = t.nodes[id];
    if (!nd.is_leaf()) {
      stack.push_back(nd.left);
      stack.push_back(nd.right);
    }
  }
  std::sort(keep.begin(), keep.end());
  for (std::int32_t id : keep) {
    const TreeNode& nd = t.nodes[id];
    ModelNode m;
    m.id = nd.id;
    m.rule = nd.rule;
    m.left = nd.left;
    m.right = nd.right;
    m.cluster = nd.cluster;
    m.n = nd.stats.count;
    m.compactness = nd.compactness;
    m.fairness = nd.fairness;
    m.group_counts = nd.stats.group_counts;
    doc.nodes.push_back(std::move(m));
  }
  doc.finish();
  return doc;
}

std::string save_model(const ModelDocument& doc) {
  JsonWriter w;
  w.begin_object();
  w.key("format_version");
  w.value(static_cast<std::int64_t>(doc.format_version));
  w.key("algorithm");
  w.value(doc.algorithm);

  w.key("config");
  w.begin_object();
  w.key("k");
  w.value(static_cast<std::int64_t>(doc.config.k));
  w.key("lambda");
  if (doc.lambda_set)
    w.value(doc.config.lambda);
  else
    w.null();
  w.key("weights");
  if (doc.config.weights) {
    w.begin_array();
    for (double x : *doc.config.weights) w.value(x);
    w.end_array();
  } else {
    w.null();
  }
  w.key("n_min");
  w.value(static_cast<std::int64_t>(doc.config.n_min));
  w.key("epsilon");
  w.value(doc.config.epsilon);
  w.key("cat_cap");
  w.value(static_cast<std::int64_t>(doc.config.cat_cap));
  w.key("standardize");
  w.value(doc.config.standardize);
  w.end_object();

  w.key("schema");
  w.begin_array();
  for (const auto& c : doc.schema_columns) {
    w.begin_object();
    w.key("name");
    w.value(c.name);
    w.key("role");
    w.value(to_string(c.role));
    w.end_object();
  }
  w.end_array();

  w.key("scaling");
  if (doc.scaling) {
    w.begin_array();
    for (std::size_t f = 0; f < doc.scaling->mean.size(); ++f) {
      w.begin_object();
      w.key("mean");
      w.value(doc.scaling->mean[f]);
      w.key("stddev");
      w.value(doc.scaling->stddev[f]);
      w.end_object();
    }
    w.end_array();
  } else {
    w.null();
  }

  w.key("categorical_dictionaries");
  w.begin_array();
  for (const auto& d : doc.cat_dicts) write_string_array(w, d);
  w.end_array();
  w.key("sensitive_dictionaries");
  w.begin_array();
  for (const auto& d : doc.sens_dicts) write_string_array(w, d);
  w.end_array();
  w.key("label_dictionary");
  if (doc.label_name.empty())
    w.null();
  else
    write_string_array(w, doc.label_tokens);

  w.key("root");
  w.value(doc.root);
  w.key("nodes");
  w.begin_array();
  for (const auto& nd : doc.nodes) {
    w.begin_object();
    w.key("id");
    w.value(nd.id);
    if (!nd.is_leaf()) {
      w.key("rule");
      w.begin_object();
      if (nd.rule->kind == SplitRule::Kind::NumericThreshold) {
        w.key("kind");
        w.value("numeric");
        w.key("feature");
        w.value(nd.rule->feature);
        w.key("threshold");
        w.value(nd.rule->threshold);
      } else {
        w.key("kind");
        w.value("categorical");
        w.key("feature");
        w.value(nd.rule->feature);
        w.key("left_categories");
        w.begin_array();
        for (std::int32_t c : nd.rule->left_categories) w.value(c);
        w.end_array();
      }
      w.end_object();
      w.key("left");
      w.value(nd.left);
      w.key("right");
      w.value(nd.right);
    } else {
      w.key("cluster");
      w.value(nd.cluster);
    }
    w.key("n");
    w.value(nd.n);
    w.key("compactness");
    w.value(nd.compactness);
    w.key("fairness");
    w.value(nd.fairness);
    w.key("group_counts");
    w.begin_array();
    for (const auto& gc : nd.group_counts) {
      w.begin_array();
      for (std::int64_t c : gc) w.value(c);
      w.end_array();
    }
    w.end_array();
    w.end_object();
  }
  w.end_array();

  w.key("totals");
  w.begin_object();
  w.key("compactness");
  w.value(doc.total_compactness);
  w.key("fairness");
  w.value(doc.total_fairness);
  w.end_object();
  w.key("exhausted");
  w.value(doc.exhausted);
  w.key("negative_gain_splits");
  w.value(doc.negative_gain_splits);

  w.key("provenance");
  w.begin_object();
  w.key("algorithm");
  w.value(doc.algorithm);
  w.key("created_at");
  w.value(doc.created_at);
  w.key("dataset_fingerprint");
  w.value(doc.dataset_fingerprint);
  w.end_object();

  w.end_object();
  w.out += '\n';
  return std::move(w.out);
}

std::string save_model(const ClusteringTree& t) {
  return save_model(build_document(t));
}

void save_model_file(const std::string& path, const ModelDocument& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  std::string bytes = save_model(doc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw Error("failed writing '" + path + "'");
}

ModelDocument load_model(const std::string& bytes) {
  json j;
  try {
    j = json::parse(bytes);
  } catch (const json::exception& e) {
    fail(e.what());
  }
  if (!j.is_object()) fail("top level must be an object");

  ModelDocument doc;
  try {
    std::int64_t version = as_int(member(j, "format_version"), "format_version");
    if (version != 1)
      fail("unsupported format_version " + std::to_string(version));
    doc.format_version = 1;
    doc.algorithm = as_string(member(j, "algorithm"), "algorithm");
    if (doc.algorithm != "IFCT" && doc.algorithm != "IFCT-P")
      fail("unknown algorithm '" + doc.algorithm + "'");

    const json& cfg = member(j, "config");
    std::int64_t kv = as_int(member(cfg, "k"), "k");
    if (kv < 1 || kv > (std::int64_t{1} << 32)) fail("k out of range");
    doc.config.k = static_cast<std::size_t>(kv);
    const json& lam = member(cfg, "lambda");
    if (lam.is_null()) {
      doc.lambda_set = false;
      doc.config.lambda = 0.0;
    } else {
      doc.lambda_set = true;
      doc.config.lambda = as_finite(lam, "lambda");
    }
    const json& wts = member(cfg, "weights");
    if (!wts.is_null()) {
      if (!wts.is_array()) fail("weights must be null or an array");
      std::vector<double> v;
      for (const auto& x : wts) v.push_back(as_finite(x, "weight"));
      doc.config.weights = std::move(v);
    }
    doc.config.n_min = as_int(member(cfg, "n_min"), "n_min");
    doc.config.epsilon = as_finite(member(cfg, "epsilon"), "epsilon");
    std::int64_t cap = as_int(member(cfg, "cat_cap"), "cat_cap");
    if (cap < 0 || cap > 1000) fail("cat_cap out of range");
    doc.config.cat_cap = static_cast<std::int32_t>(cap);
    const json& st = member(cfg, "standardize");
    if (!st.is_boolean()) fail("standardize must be a boolean");
    doc.config.standardize = st.get<bool>();

    const json& schema = member(j, "schema");
    if (!schema.is_array()) fail("schema must be an array");
    for (const auto& c : schema) {
      Column col;
      col.name = as_string(member(c, "name"), "column name");
      col.role = role_from_string(as_string(member(c, "role"), "column role"));
      doc.schema_columns.push_back(std::move(col));
    }

    const json& sc = member(j, "scaling");
    if (!sc.is_null()) {
      if (!sc.is_array()) fail("scaling must be null or an array");
      FeatureScaling fs;
      for (const auto& e : sc) {
        fs.mean.push_back(as_finite(member(e, "mean"), "scaling mean"));
        fs.stddev.push_back(as_finite(member(e, "stddev"), "scaling stddev"));
      }
      doc.scaling = std::move(fs);
    }

    doc.cat_dicts = as_dicts(member(j, "categorical_dictionaries"),
                             "categorical_dictionaries");
    doc.sens_dicts =
        as_dicts(member(j, "sensitive_dictionaries"), "sensitive_dictionaries");
    const json& ld = member(j, "label_dictionary");
    if (!ld.is_null()) {
      if (!ld.is_array()) fail("label_dictionary must be null or an array");
      for (const auto& t : ld)
        doc.label_tokens.push_back(as_string(t, "label token"));
    }

    doc.root = static_cast<std::int32_t>(as_int(member(j, "root"), "root"));
    const json& nodes = member(j, "nodes");
    if (!nodes.is_array()) fail("nodes must be an array");
    for (const auto& nj : nodes) {
      ModelNode nd;
      nd.id = static_cast<std::int32_t>(as_int(member(nj, "id"), "node id"));
      if (nj.contains("rule")) {
        const json& rj = nj.at("rule");
        SplitRule r;
        std::string kind = as_string(member(rj, "kind"), "rule kind");
        r.feature = static_cast<std::int32_t>(
            as_int(member(rj, "feature"), "rule feature"));
        if (kind == "numeric") {
          r.kind = SplitRule::Kind::NumericThreshold;
          r.threshold = as_finite(member(rj, "threshold"), "threshold");
        } else if (kind == "categorical") {
          r.kind = SplitRule::Kind::CategorySubset;
          const json& cats = member(rj, "left_categories");
          if (!cats.is_array()) fail("left_categories must be an array");
          for (const auto& c : cats)
            r.left_categories.push_back(
                static_cast<std::int32_t>(as_int(c, "category id")));
        } else {
          fail("unknown rule kind '" + kind + "'");
        }
        nd.rule = std::move(r);
        nd.left =
            static_cast<std::int32_t>(as_int(member(nj, "left"), "left"));
        nd.right =
            static_cast<std::int32_t>(as_int(member(nj, "right"), "right"));
      } else {
        nd.cluster = static_cast<std::int32_t>(
            as_int(member(nj, "cluster"), "cluster"));
      }
      nd.n = as_int(member(nj, "n"), "node n");
      nd.compactness = as_finite(member(nj, "compactness"), "compactness");
      nd.fairness = as_finite(member(nj, "fairness"), "fairness");
      const json& gc = member(nj, "group_counts");
      if (!gc.is_array()) fail("group_counts must be an array");
      for (const auto& row : gc) {
        if (!row.is_array()) fail("group_counts rows must be arrays");
        std::vector<std::int64_t> counts;
        for (const auto& c : row) counts.push_back(as_int(c, "group count"));
        nd.group_counts.push_back(std::move(counts));
      }
      doc.nodes.push_back(std::move(nd));
    }

    const json& totals = member(j, "totals");
    doc.total_compactness =
        as_finite(member(totals, "compactness"), "total compactness");
    doc.total_fairness =
        as_finite(member(totals, "fairness"), "total fairness");
    const json& ex = member(j, "exhausted");
    if (!ex.is_boolean()) fail("exhausted must be a boolean");
    doc.exhausted = ex.get<bool>();
    doc.negative_gain_splits =
        as_int(member(j, "negative_gain_splits"), "negative_gain_splits");

    const json& prov = member(j, "provenance");
    std::string prov_alg =
        as_string(member(prov, "algorithm"), "provenance algorithm");
    if (prov_alg != doc.algorithm)
      fail("provenance algorithm does not match the document");
    doc.created_at = as_string(member(prov, "created_at"), "created_at");
    doc.dataset_fingerprint =
        as_string(member(prov, "dataset_fingerprint"), "dataset_fingerprint");
  } catch (const json::exception& e) {
    fail(e.what());
  }

  try {
    doc.config.validate();
  } catch (const Error& e) {
    fail(e.what());
  }
  doc.finish();
  return doc;
}

ModelDocument load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error("failed reading '" + path + "'");
  return load_model(ss.str());
}

namespace {

std::string join(const std::vector<std::string>& parts,
                 const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string category_set(const ModelDocument& doc, const SplitRule& r) {
  std::vector<std::string> toks;
  for (std::int32_t c : r.left_categories)
    toks.push_back(doc.cat_dicts[r.feature][c]);
  return "{" + join(toks, ", ") + "}";
}

std::string condition(const ModelDocument& doc, const SplitRule& r,
                      bool left) {
  if (r.kind == SplitRule::Kind::NumericThreshold)
    return doc.num_names[r.feature] + (left ? " ≤ " : " > ") +
           csv::format_double(r.threshold);
  return doc.cat_names[r.feature] + (left ? " ∈ " : " ∉ ") +
         category_set(doc, r);
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string export_rules(const ModelDocument& doc) {
  std::string out;
  std::vector<std::string> conds;
  // Left-first traversal visits leaves in cluster id order.
  auto walk = [&](auto&& self, std::int32_t id) -> void {
    const ModelNode& nd = doc.nodes[doc.index_of.at(id)];
    if (nd.is_leaf()) {
      out += "cluster " + std::to_string(nd.cluster) + " (n=" +
             std::to_string(nd.n) + "): ";
      out += conds.empty() ? "true" : join(conds, " AND ");
      out += '\n';
      return;
    }
    conds.push_back(condition(doc, *nd.rule, true));
    self(self, nd.left);
    conds.back() = condition(doc, *nd.rule, false);
    self(self, nd.right);
    conds.pop_back();
  };
  walk(walk, doc.root);
  return out;
}

std::string export_dot(const ModelDocument& doc) {
  std::string out = "digraph fairtree {\n  node [shape=box];\n";
  for (const auto& nd : doc.nodes) {
    std::string name = "n" + std::to_string(nd.id);
    if (!nd.is_leaf()) {
      out += "  " + name + " [label=\"" +
             dot_escape(condition(doc, *nd.rule, true)) + "\"];\n";
      out += "  " + name + " -> n" + std::to_string(nd.left) + ";\n";
      out += "  " + name + " -> n" + std::to_string(nd.right) + ";\n";
    } else {
      std::string label =
          "cluster " + std::to_string(nd.cluster) + "\\nn=" +
          std::to_string(nd.n);
      for (std::size_t u = 0; u < doc.sens_names.size(); ++u) {
        label += "\\n" + dot_escape(doc.sens_names[u]) + ":";
        for (std::size_t g = 0; g < doc.sens_dicts[u].size(); ++g) {
          double pct =
              nd.n > 0 ? 100.0 * static_cast<double>(nd.group_counts[u][g]) /
                             static_cast<double>(nd.n)
                       : 0.0;
          char buf[48];
          std::snprintf(buf, sizeof buf, " %s %.1f%%",
                        dot_escape(doc.sens_dicts[u][g]).c_str(), pct);
          label += buf;
        }
      }
      out += "  " + name + " [label=\"" + label + "\"];\n";
    }
  }
  out += "}\n";
  return out;
}

std::vector<std::int32_t> predict_assignments(const ModelDocument& doc,
                                              const csv::Table& input,
                                              bool permissive) {
  std::vector<std::size_t> num_cols, cat_cols;
  for (const auto& name : doc.num_names) {
    auto idx = input.column_index(name);
    if (!idx) throw Error("input is missing feature column '" + name + "'");
    num_cols.push_back(*idx);
  }
  for (const auto& name : doc.cat_names) {
    auto idx = input.column_index(name);
    if (!idx) throw Error("input is missing feature column '" + name + "'");
    cat_cols.push_back(*idx);
  }

  std::vector<Dictionary> dicts;
  for (const auto& tokens : doc.cat_dicts) {
    Dictionary d;
    for (const auto& t : tokens) d.encode(t);
    dicts.push_back(std::move(d));
  }

  std::vector<std::int32_t> out;
  out.reserve(input.rows.size());
  std::vector<double> numv(doc.num_names.size());
  std::vector<std::int32_t> catv(doc.cat_names.size());
  for (std::size_t r = 0; r < input.rows.size(); ++r) {
    const auto& row = input.rows[r];
    for (std::size_t f = 0; f < num_cols.size(); ++f) {
      const std::string& tok = row[num_cols[f]];
      double v;
      if (!csv::parse_double(tok, v))
        throw Error("row " + std::to_string(r + 1) + " column '" +
                    doc.num_names[f] + "': cannot parse '" + tok +
                    "' as a number");
      numv[f] = v;
    }
    for (std::size_t f = 0; f < cat_cols.size(); ++f) {
      const std::string& tok = row[cat_cols[f]];
      std::int32_t id = dicts[f].find(tok);
      if (id < 0 && !permissive)
        throw Error("row " + std::to_string(r + 1) + " column '" +
                    doc.cat_names[f] + "': unknown category '" + tok + "'");
      catv[f] = id;  // unknown categories fail every membership test
    }
    out.push_back(doc.route(numv, catv));
  }
  return out;
}

csv::Table predict_batch(const ModelDocument& doc, const csv::Table& input,
                         bool permissive) {
  if (input.column_index("cluster"))
    throw Error("input already has a 'cluster' column");
  std::vector<std::int32_t> assign = predict_assignments(doc, input, permissive);
  csv::Table out = input;
  out.header.push_back("cluster");
  for (std::size_t r = 0; r < out.rows.size(); ++r)
    out.rows[r].push_back(std::to_string(assign[r]));
  return out;
}

}  // namespace fairtree
