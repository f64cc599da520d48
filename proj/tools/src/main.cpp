#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "fairtree/csv.hpp"
#include "fairtree/dataset.hpp"
#include "fairtree/error.hpp"
#include "fairtree/losses.hpp"
#include "fairtree/metrics.hpp"
#include "fairtree/model_io.hpp"
#include "fairtree/prune.hpp"
#include "fairtree/report.hpp"
#include "fairtree/schema.hpp"
#include "fairtree/tree.hpp"

namespace {

using namespace fairtree;
using Clock = std::chrono::steady_clock;

constexpr int kExitError = 2;
constexpr int kExitExhausted = 3;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw Error("failed writing '" + path + "'");
}

// "--weights a=0.5,b=0.5": every sensitive attribute must be assigned once.
std::vector<double> parse_weights(const std::string& spec,
                                  const std::vector<std::string>& names) {
  std::vector<double> w(names.size());
  std::vector<bool> seen(names.size(), false);
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    std::size_t comma = spec.find(',', pos);
    std::string item = spec.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    std::size_t eq = item.find('=');
    if (eq == std::string::npos)
      throw Error("weights: expected name=value, got '" + item + "'");
    std::string name = item.substr(0, eq);
    double v;
    if (!csv::parse_double(item.substr(eq + 1), v) || v < 0)
      throw Error("weights: bad value in '" + item + "'");
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end())
      throw Error("weights: unknown sensitive attribute '" + name + "'");
    std::size_t u = static_cast<std::size_t>(it - names.begin());
    if (seen[u]) throw Error("weights: attribute '" + name + "' given twice");
    seen[u] = true;
    w[u] = v;
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  for (std::size_t u = 0; u < names.size(); ++u)
    if (!seen[u])
      throw Error("weights: missing sensitive attribute '" + names[u] + "'");
  return w;
}

// Options shared by every command that fits a tree.
struct FitFlags {
  std::string data, schema;
  std::int64_t k = 1;
  std::int64_t n_min = 1;
  std::int32_t cat_cap = 12;
  bool standardize = false;
  std::string weights;

  void attach(CLI::App* cmd, bool with_k = true) {
    cmd->add_option("--data", data, "Input CSV path")->required();
    cmd->add_option("--schema", schema, "Schema JSON path")->required();
    if (with_k)
      cmd->add_option("--k", k, "Number of clusters (leaves)")->required();
    cmd->add_option("--n-min", n_min, "Minimum samples per child");
    cmd->add_option("--cat-cap", cat_cap,
                    "Max distinct categories for exhaustive subset search");
    cmd->add_flag("--standardize", standardize,
                  "Standardize numerical features before fitting");
    cmd->add_option("--weights", weights,
                    "Per-attribute fairness weights, e.g. a=0.5,b=0.5");
  }

  FitConfig config(const Dataset& ds) const {
    FitConfig cfg;
    cfg.k = static_cast<std::size_t>(k);
    cfg.n_min = n_min;
    cfg.cat_cap = cat_cap;
    cfg.standardize = standardize;
    if (!weights.empty()) cfg.weights = parse_weights(weights, ds.sens_names);
    return cfg;
  }
};

// Per-cluster table as CSV: one row per cluster, one column per group share.
std::string report_csv(const RunReport& r) {
  csv::Table t;
  t.header = {"cluster", "n", "compactness", "fairness"};
  for (std::size_t u = 0; u < r.sens_names.size(); ++u)
    for (const auto& g : r.sens_groups[u])
      t.header.push_back(r.sens_names[u] + "=" + g);
  for (const auto& ls : r.leaves) {
    std::vector<std::string> row = {
        std::to_string(ls.cluster), std::to_string(ls.n),
        csv::format_double(ls.compactness), csv::format_double(ls.fairness)};
    for (const auto& shares : ls.group_shares)
      for (double s : shares) row.push_back(csv::format_double(s));
    t.rows.push_back(std::move(row));
  }
  return csv::write(t);
}

struct FitOutputs {
  std::string model, report, report_table;
};

int run_fit(const std::string& algo, const FitFlags& flags, double lambda,
            bool lambda_given, const FitOutputs& out) {
  Schema schema = Schema::from_json_file(flags.schema);
  Dataset ds = load_csv(flags.data, schema);
  FitConfig cfg = flags.config(ds);

  ClusteringTree tree;
  auto start = Clock::now();
  if (algo == "ifct") {
    if (!lambda_given)
      throw Error("fit: --lambda is required for --algo ifct");
    cfg.lambda = lambda;
    tree = fit_ifct(ds, cfg);
  } else {
    if (lambda_given)
      throw Error(
          "fit: --algo ifct-p takes no --lambda; its fairness pressure comes "
          "from pruning alone");
    tree = fit_ifct_p(ds, cfg);
  }
  double fit_seconds = seconds_since(start);

  std::vector<std::int32_t> assign = tree.assignments(ds);
  RunReport report = build_report(tree, ds, assign, fit_seconds);

  save_model_file(out.model, build_document(tree));
  if (!out.report.empty()) write_file(out.report, to_json(report));
  if (!out.report_table.empty()) write_file(out.report_table, report_csv(report));
  std::cout << to_text(report);

  if (tree.exhausted) {
    std::cerr << "warning: only " << tree.leaf_count()
              << " leaves could be formed (requested " << cfg.k << ")\n";
    return kExitExhausted;
  }
  return 0;
}

int run_predict(const std::string& model_path, const std::string& data_path,
                const std::string& out_path, bool permissive) {
  ModelDocument doc = load_model_file(model_path);
  csv::Table input = csv::parse_file(data_path);
  csv::Table output = predict_batch(doc, input, permissive);
  std::string bytes = csv::write(output);
  if (out_path.empty())
    std::cout << bytes;
  else
    write_file(out_path, bytes);
  return 0;
}

int run_evaluate(const std::string& model_path, const FitFlags& flags,
                 const std::string& report_path, bool permissive) {
  ModelDocument doc = load_model_file(model_path);
  Schema schema = Schema::from_json_file(flags.schema);
  std::string raw;
  csv::Table table = csv::parse_file(flags.data, &raw);
  Dataset ds = dataset_from_table(table, schema,
                                  fnv1a64(raw.data(), raw.size()));

  auto start = Clock::now();
  std::vector<std::int32_t> pred = predict_assignments(doc, table, permissive);
  std::size_t k = doc.leaf_count();

  // Losses are measured on this dataset, in the model's feature space.
  Dataset spaced = ds;
  if (doc.scaling) {
    for (std::size_t i = 0; i < spaced.n; ++i)
      for (std::size_t f = 0; f < spaced.num_features; ++f)
        spaced.num[i * spaced.num_features + f] =
            doc.scaling->apply(spaced.num_at(i, f), f);
  }
  std::vector<std::vector<std::int32_t>> members(k);
  for (std::size_t i = 0; i < pred.size(); ++i)
    members[static_cast<std::size_t>(pred[i])].push_back(
        static_cast<std::int32_t>(i));

  std::vector<std::int32_t> all_rows(spaced.n);
  std::iota(all_rows.begin(), all_rows.end(), 0);
  NodeStats all = NodeStats::of(spaced, all_rows);
  MixedWeight w = mixed_weight(all, spaced.num_features, spaced.cat_features,
                               doc.config.epsilon);
  std::optional<std::vector<double>> weights = doc.config.weights;
  if (weights && weights->size() != ds.sens_attrs)
    throw Error("model weights do not match this data's sensitive attributes");
  SensitiveProfile profile = compute_profile(ds, weights);

  RunReport r;
  r.algorithm = doc.algorithm;
  r.k_requested = doc.config.k;
  r.k_actual = k;
  if (doc.lambda_set) r.lambda = doc.config.lambda;
  r.n = ds.n;
  r.num_features = ds.num_features;
  r.cat_features = ds.cat_features;
  r.sens_attrs = ds.sens_attrs;
  r.exhausted = doc.exhausted;
  r.sens_names = ds.sens_names;
  for (const auto& d : ds.sens_dicts) r.sens_groups.push_back(d.tokens);
  for (std::size_t c = 0; c < k; ++c) {
    NodeStats s = NodeStats::of(spaced, members[c]);
    LeafSummary ls;
    ls.cluster = static_cast<std::int32_t>(c);
    ls.n = s.count;
    ls.compactness = compactness_loss(s, w);
    ls.fairness = fairness_deviation(s, profile);
    for (const auto& gc : s.group_counts) {
      std::vector<double> shares;
      for (std::int64_t cnt : gc)
        shares.push_back(ls.n > 0 ? static_cast<double>(cnt) /
                                        static_cast<double>(ls.n)
                                  : 0.0);
      ls.group_shares.push_back(std::move(shares));
    }
    r.total_compactness += ls.compactness;
    r.total_fairness += ls.fairness;
    r.leaves.push_back(std::move(ls));
  }
  if (r.lambda) r.objective = r.total_compactness + *r.lambda * r.total_fairness;

  if (ds.labels) {
    r.acc = accuracy(pred, *ds.labels);
    r.nmi = nmi(pred, *ds.labels);
  }
  if (ds.sens_attrs > 0) {
    GroupContingency gc = GroupContingency::from(pred, ds, k);
    r.fairness = fairness_report(gc, profile.weights, ds.sens_names);
  }
  r.fit_seconds = seconds_since(start);

  if (!report_path.empty()) write_file(report_path, to_json(r));
  std::cout << to_text(r);
  return 0;
}

int run_synth(std::int64_t blobs, std::int64_t n_per_blob, double stddev,
              double radius, double p, std::uint64_t seed,
              const std::string& out_path, const std::string& schema_path) {
  if (blobs < 1) throw Error("synth: --blobs must be at least 1");
  if (n_per_blob < 1) throw Error("synth: --n must be at least 1");
  if (!(p >= 0.0 && p <= 1.0)) throw Error("synth: --p must be in [0, 1]");
  if (!(stddev > 0.0)) throw Error("synth: --stddev must be positive");

  std::vector<std::array<double, 2>> centers;
  for (std::int64_t b = 0; b < blobs; ++b) {
    double angle = 2.0 * std::numbers::pi * static_cast<double>(b) /
                   static_cast<double>(blobs);
    centers.push_back({radius * std::cos(angle), radius * std::sin(angle)});
  }
  Dataset ds = generate_synthetic(static_cast<std::size_t>(n_per_blob),
                                  centers, stddev, p, seed);
  write_file(out_path, csv::write(dataset_to_table(ds)));

  Schema schema;
  for (const auto& c : ds.schema_columns) schema.columns.push_back(c);
  write_file(schema_path, schema.to_json());
  std::cout << "wrote " << ds.n << " rows to " << out_path << " and schema to "
            << schema_path << "\n";
  return 0;
}

std::size_t thread_cap() {
  std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("FAIRTREE_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1)
      return std::min<std::size_t>(static_cast<std::size_t>(v), hw);
  }
  return hw;
}

int run_sweep(const FitFlags& flags, std::vector<double> lambdas,
              const std::string& out_path, bool parallel) {
  if (lambdas.empty()) throw Error("sweep: the lambda grid is empty");
  for (double l : lambdas)
    if (!(l >= 0.0) || !std::isfinite(l))
      throw Error("sweep: lambda values must be finite and non-negative");

  Schema schema = Schema::from_json_file(flags.schema);
  Dataset ds = load_csv(flags.data, schema);

  struct Row {
    double lambda = 0.0;
    std::optional<double> acc, nmi, bal, mnce;
    double compactness = 0.0, fairness = 0.0;
  };
  std::vector<Row> rows(lambdas.size());

  auto fit_point = [&](std::size_t i) {
    FitConfig cfg = flags.config(ds);
    cfg.lambda = lambdas[i];
    ClusteringTree tree = fit_ifct(ds, cfg);
    std::vector<std::int32_t> assign = tree.assignments(ds);
    Row& r = rows[i];
    r.lambda = lambdas[i];
    r.compactness = tree.total_compactness;
    r.fairness = tree.total_fairness;
    if (ds.labels) {
      r.acc = accuracy(assign, *ds.labels);
      r.nmi = nmi(assign, *ds.labels);
    }
    if (ds.sens_attrs > 0) {
      GroupContingency gc =
          GroupContingency::from(assign, ds, tree.leaf_count());
      FairnessReport fr = fairness_report(gc, tree.profile.weights,
                                          ds.sens_names);
      r.bal = fr.bal_average;
      r.mnce = fr.mnce_average;
    }
  };

  std::size_t workers =
      parallel ? std::min(thread_cap(), lambdas.size()) : std::size_t{1};
  if (workers > 1) {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    std::vector<std::string> failures(lambdas.size());
    for (std::size_t t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (;;) {
          std::size_t i = next.fetch_add(1);
          if (i >= lambdas.size()) return;
          try {
            fit_point(i);
          } catch (const std::exception& e) {
            failures[i] = e.what();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    for (const auto& f : failures)
      if (!f.empty()) throw Error(f);
  } else {
    for (std::size_t i = 0; i < lambdas.size(); ++i) fit_point(i);
  }

  // Each metric is additionally reported divided by its column maximum; a
  // column that is identically zero normalizes to 1 (its values equal the max).
  auto norm = [](double v, double mx) { return mx > 0.0 ? v / mx : 1.0; };
  csv::Table t;
  t.header = {"lambda",      "acc",      "nmi",      "bal",
              "mnce",        "compactness", "fairness", "acc_norm",
              "nmi_norm",    "bal_norm", "mnce_norm", "compactness_norm",
              "fairness_norm"};
  double mx_acc = 0, mx_nmi = 0, mx_bal = 0, mx_mnce = 0, mx_c = 0, mx_f = 0;
  for (const Row& r : rows) {
    mx_acc = std::max(mx_acc, r.acc.value_or(0.0));
    mx_nmi = std::max(mx_nmi, r.nmi.value_or(0.0));
    mx_bal = std::max(mx_bal, r.bal.value_or(0.0));
    mx_mnce = std::max(mx_mnce, r.mnce.value_or(0.0));
    mx_c = std::max(mx_c, r.compactness);
    mx_f = std::max(mx_f, r.fairness);
  }
  auto opt_str = [](const std::optional<double>& v) {
    return v ? csv::format_double(*v) : std::string();
  };
  auto opt_norm = [&](const std::optional<double>& v, double mx) {
    return v ? csv::format_double(norm(*v, mx)) : std::string();
  };
  for (const Row& r : rows) {
    t.rows.push_back({csv::format_double(r.lambda), opt_str(r.acc),
                      opt_str(r.nmi), opt_str(r.bal), opt_str(r.mnce),
                      csv::format_double(r.compactness),
                      csv::format_double(r.fairness),
                      opt_norm(r.acc, mx_acc), opt_norm(r.nmi, mx_nmi),
                      opt_norm(r.bal, mx_bal), opt_norm(r.mnce, mx_mnce),
                      csv::format_double(norm(r.compactness, mx_c)),
                      csv::format_double(norm(r.fairness, mx_f))});
  }
  std::string bytes = csv::write(t);
  if (out_path.empty())
    std::cout << bytes;
  else
    write_file(out_path, bytes);
  return 0;
}

int run_export(const std::string& model_path, const std::string& rules_path,
               const std::string& dot_path) {
  ModelDocument doc = load_model_file(model_path);
  if (rules_path.empty() && dot_path.empty()) {
    std::cout << export_rules(doc);
    return 0;
  }
  if (!rules_path.empty()) write_file(rules_path, export_rules(doc));
  if (!dot_path.empty()) write_file(dot_path, export_dot(doc));
  return 0;
}

int run_bench(const std::vector<std::int64_t>& sizes, std::int64_t k,
              double lambda, std::uint64_t seed, const std::string& out_path) {
  if (sizes.empty()) throw Error("bench: the size grid is empty");
  csv::Table t;
  t.header = {"n", "seconds", "ratio"};
  double prev = 0.0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    std::int64_t n = sizes[i];
    if (n < 4) throw Error("bench: sizes must be at least 4");
    std::vector<std::array<double, 2>> centers;
    for (int b = 0; b < 4; ++b) {
      double angle = 2.0 * std::numbers::pi * b / 4.0;
      centers.push_back({10.0 * std::cos(angle), 10.0 * std::sin(angle)});
    }
    Dataset ds = generate_synthetic(static_cast<std::size_t>(n / 4), centers,
                                    1.0, 0.5, seed);
    FitConfig cfg;
    cfg.k = static_cast<std::size_t>(k);
    cfg.lambda = lambda;
    auto start = Clock::now();
    ClusteringTree tree = fit_ifct(ds, cfg);
    double secs = seconds_since(start);
    (void)tree;
    std::vector<std::string> row = {std::to_string(ds.n),
                                    csv::format_double(secs)};
    row.push_back(i == 0 || prev <= 0.0
                      ? std::string()
                      : csv::format_double(secs / prev));
    t.rows.push_back(std::move(row));
    prev = secs;
  }
  std::string bytes = csv::write(t);
  if (out_path.empty())
    std::cout << bytes;
  else
    write_file(out_path, bytes);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interpretable fair clustering trees"};
  app.require_subcommand(1);

  // fit
  auto* fit = app.add_subcommand("fit", "Fit a clustering tree");
  std::string fit_algo;
  FitFlags fit_flags;
  double fit_lambda = 0.0;
  FitOutputs fit_out;
  fit->add_option("--algo", fit_algo, "ifct (greedy, needs --lambda) or ifct-p")
      ->required()
      ->check(CLI::IsMember({"ifct", "ifct-p"}));
  fit_flags.attach(fit);
  CLI::Option* lambda_opt =
      fit->add_option("--lambda", fit_lambda, "Fairness pressure (ifct only)");
  fit->add_option("--out", fit_out.model, "Model JSON output path")->required();
  fit->add_option("--report", fit_out.report, "Report JSON output path");
  fit->add_option("--report-csv", fit_out.report_table,
                  "Per-cluster table CSV output path");

  // predict
  auto* predict = app.add_subcommand("predict", "Assign clusters to CSV rows");
  std::string pr_model, pr_data, pr_out;
  bool pr_permissive = false;
  predict->add_option("--model", pr_model, "Model JSON path")->required();
  predict->add_option("--data", pr_data, "Input CSV path")->required();
  predict->add_option("--out", pr_out, "Output CSV path (default stdout)");
  predict->add_flag("--permissive-predict", pr_permissive,
                    "Route unknown categories right instead of failing");

  // evaluate
  auto* evaluate =
      app.add_subcommand("evaluate", "Score a fitted model on labeled data");
  std::string ev_model, ev_report;
  bool ev_permissive = false;
  FitFlags ev_flags;
  evaluate->add_option("--model", ev_model, "Model JSON path")->required();
  evaluate->add_option("--data", ev_flags.data, "Input CSV path")->required();
  evaluate->add_option("--schema", ev_flags.schema, "Schema JSON path")
      ->required();
  evaluate->add_option("--report", ev_report, "Report JSON output path");
  evaluate->add_flag("--permissive-predict", ev_permissive,
                     "Route unknown categories right instead of failing");

  // synth
  auto* synth = app.add_subcommand("synth", "Generate Gaussian blob data");
  std::int64_t sy_blobs = 4, sy_n = 400;
  double sy_stddev = 1.0, sy_radius = 10.0, sy_p = 0.5;
  std::uint64_t sy_seed = 1;
  std::string sy_out, sy_schema;
  synth->add_option("--blobs", sy_blobs, "Number of blobs");
  synth->add_option("--n", sy_n, "Samples per blob");
  synth->add_option("--stddev", sy_stddev, "Blob standard deviation");
  synth->add_option("--radius", sy_radius, "Blob centers circle radius");
  synth->add_option("--p", sy_p, "Bernoulli parameter for the group column");
  synth->add_option("--seed", sy_seed, "RNG seed");
  synth->add_option("--out", sy_out, "Data CSV output path")->required();
  synth->add_option("--schema-out", sy_schema, "Schema JSON output path")
      ->required();

  // sweep
  auto* sweep =
      app.add_subcommand("sweep", "Fit across a lambda grid, emit metrics CSV");
  FitFlags sw_flags;
  std::vector<double> sw_lambdas;
  double sw_min = 0.0, sw_max = 0.0;
  std::int64_t sw_points = 0;
  std::string sw_out;
  bool sw_parallel = false;
  sw_flags.attach(sweep);
  CLI::Option* sw_list = sweep->add_option(
      "--lambdas", sw_lambdas, "Explicit lambda values (comma separated)");
  CLI::Option* sw_lo =
      sweep->add_option("--lambda-min", sw_min, "Log-range start");
  CLI::Option* sw_hi = sweep->add_option("--lambda-max", sw_max, "Log-range end");
  CLI::Option* sw_np =
      sweep->add_option("--points", sw_points, "Log-range point count");
  sweep->add_option("--out", sw_out, "Output CSV path (default stdout)");
  sweep->add_flag("--parallel", sw_parallel,
                  "Fit lambda points concurrently (FAIRTREE_THREADS caps)");
  sw_list->delimiter(',');

  // export
  auto* exp = app.add_subcommand("export", "Emit rule text or a DOT graph");
  std::string ex_model, ex_rules, ex_dot;
  exp->add_option("--model", ex_model, "Model JSON path")->required();
  exp->add_option("--rules", ex_rules, "Rule text output path");
  exp->add_option("--dot", ex_dot, "DOT graph output path");

  // bench
  auto* bench =
      app.add_subcommand("bench", "Time fits on synthetic data, emit CSV");
  std::vector<std::int64_t> bn_sizes = {4000, 8000, 16000};
  std::int64_t bn_k = 10;
  double bn_lambda = 1e4;
  std::uint64_t bn_seed = 1;
  std::string bn_out;
  CLI::Option* bn_list =
      bench->add_option("--sizes", bn_sizes, "Sample counts (comma separated)");
  bench->add_option("--k", bn_k, "Number of clusters");
  bench->add_option("--lambda", bn_lambda, "Fairness pressure");
  bench->add_option("--seed", bn_seed, "RNG seed");
  bench->add_option("--out", bn_out, "Output CSV path (default stdout)");
  bn_list->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitError;
  }

  try {
    if (fit->parsed())
      return run_fit(fit_algo, fit_flags, fit_lambda, lambda_opt->count() > 0,
                     fit_out);
    if (predict->parsed())
      return run_predict(pr_model, pr_data, pr_out, pr_permissive);
    if (evaluate->parsed())
      return run_evaluate(ev_model, ev_flags, ev_report, ev_permissive);
    if (synth->parsed())
      return run_synth(sy_blobs, sy_n, sy_stddev, sy_radius, sy_p, sy_seed,
                       sy_out, sy_schema);
    if (sweep->parsed()) {
      std::vector<double> grid = sw_lambdas;
      if (sw_lo->count() || sw_hi->count() || sw_np->count()) {
        if (sw_list->count())
          throw Error("sweep: give either --lambdas or a log range, not both");
        if (!(sw_lo->count() && sw_hi->count() && sw_np->count()))
          throw Error(
              "sweep: --lambda-min, --lambda-max and --points go together");
        if (sw_points < 1) throw Error("sweep: --points must be at least 1");
        if (!(sw_min > 0.0) || !(sw_max >= sw_min))
          throw Error("sweep: need 0 < --lambda-min <= --lambda-max");
        for (std::int64_t i = 0; i < sw_points; ++i) {
          double f = sw_points == 1 ? 0.0
                                    : static_cast<double>(i) /
                                          static_cast<double>(sw_points - 1);
          grid.push_back(sw_min * std::pow(sw_max / sw_min, f));
        }
      }
      return run_sweep(sw_flags, grid, sw_out, sw_parallel);
    }
    if (exp->parsed()) return run_export(ex_model, ex_rules, ex_dot);
    if (bench->parsed())
      return run_bench(bn_sizes, bn_k, bn_lambda, bn_seed, bn_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return 0;
}
