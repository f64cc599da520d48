// Microbenchmarks for the hot paths: the single-node split scan and the two
// fitting algorithms end to end, on synthetic Gaussian blobs.
#include <benchmark/benchmark.h>

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <vector>

#include "fairtree/dataset.hpp"
#include "fairtree/losses.hpp"
#include "fairtree/prune.hpp"
#include "fairtree/split.hpp"
#include "fairtree/tree.hpp"

using namespace fairtree;

namespace {

std::vector<std::array<double, 2>> circle(int blobs, double radius) {
  std::vector<std::array<double, 2>> centers;
  for (int b = 0; b < blobs; ++b) {
    double a = 2.0 * std::numbers::pi * b / blobs;
    centers.push_back({radius * std::cos(a), radius * std::sin(a)});
  }
  return centers;
}

Dataset blobs(std::size_t n_total) {
  return generate_synthetic(n_total / 4, circle(4, 10.0), 1.0, 0.5, 17);
}

FitConfig config(std::size_t k, double lambda) {
  FitConfig cfg;
  cfg.k = k;
  cfg.lambda = lambda;
  return cfg;
}

}  // namespace

static void BM_BestRule(benchmark::State& state) {
  Dataset ds = blobs(static_cast<std::size_t>(state.range(0)));
  std::vector<std::int32_t> rows(ds.n);
  std::iota(rows.begin(), rows.end(), 0);
  NodeStats stats = NodeStats::of(ds, rows);
  MixedWeight w = mixed_weight(stats, ds.num_features, ds.cat_features);
  SensitiveProfile profile = compute_profile(ds);
  SearchParams params;

  for (auto _ : state) {
    SplitEvaluation ev = best_rule(ds, rows, stats, w, profile, 1e4, params);
    benchmark::DoNotOptimize(ev);
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(ds.n));
}
BENCHMARK(BM_BestRule)->Arg(1000)->Arg(4000)->Arg(16000)
    ->Unit(benchmark::kMillisecond);

static void BM_FitGreedy(benchmark::State& state) {
  Dataset ds = blobs(static_cast<std::size_t>(state.range(0)));
  FitConfig cfg = config(10, 1e4);
  for (auto _ : state) {
    ClusteringTree t = fit_ifct(ds, cfg);
    benchmark::DoNotOptimize(t);
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(ds.n));
}
BENCHMARK(BM_FitGreedy)->Arg(2000)->Arg(8000)->Unit(benchmark::kMillisecond);

static void BM_FitPruned(benchmark::State& state) {
  Dataset ds = blobs(static_cast<std::size_t>(state.range(0)));
  FitConfig cfg = config(10, 0.0);
  cfg.n_min = 4;  // bound the over-expansion so a run stays in milliseconds
  for (auto _ : state) {
    ClusteringTree t = fit_ifct_p(ds, cfg);
    benchmark::DoNotOptimize(t);
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(ds.n));
}
BENCHMARK(BM_FitPruned)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
