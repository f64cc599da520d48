#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "fairtree/error.hpp"
#include "fairtree/prune.hpp"
#include "testutil.hpp"

using namespace fairtree;

namespace {

const std::vector<double> kX = {0.0, 0.1, 5.0, 5.1};

FitConfig config(std::size_t k) {
  FitConfig cfg;
  cfg.k = k;
  return cfg;
}

// ids of nodes reachable from the root
std::set<std::int32_t> reachable(const ClusteringTree& t) {
  std::set<std::int32_t> seen;
  std::vector<std::int32_t> stack = {t.root};
  while (!stack.empty()) {
    std::int32_t id = stack.back();
    stack.pop_back();
    seen.insert(id);
    const TreeNode& node = t.nodes[static_cast<std::size_t>(id)];
    if (!node.is_leaf()) {
      stack.push_back(node.left);
      stack.push_back(node.right);
    }
  }
  return seen;
}

}  // namespace

TEST_SUITE("prune") {

TEST_CASE("full growth reaches singleton leaves and tracks candidates") {
  auto ds = testutil::one_dim(kX, {0, 1, 0, 1});
  PruneState state;
  auto t = grow_full(ds, config(2), &state);

  CHECK(t.leaf_count() == 4);
  CHECK(t.split_trace.size() == 3);
  CHECK(t.split_trace[0].rule.threshold == doctest::Approx(2.55));
  CHECK(std::count(state.is_candidate.begin(), state.is_candidate.end(), 1) == 3);
  CHECK(state.leaf_count == 4);
  CHECK(state.subtree_leaves[0] == 4);

  for (std::int32_t leaf : t.leaves) {
    CHECK(t.nodes[static_cast<std::size_t>(leaf)].samples.size() == 1);
  }
}

TEST_CASE("identical rows grow nothing") {
  auto ds = testutil::one_dim({3, 3, 3}, {0, 1, 0});
  PruneState state;
  auto t = grow_full(ds, config(1), &state);
  CHECK(t.leaf_count() == 1);
  CHECK(std::count(state.is_candidate.begin(), state.is_candidate.end(), 1) == 0);
}

TEST_CASE("prune gain is the mean leaf deviation minus the node's own") {
  // groups aligned with the pairs: each pair node is itself fully skewed
  auto aligned = testutil::one_dim(kX, {0, 0, 1, 1});
  PruneState st1;
  auto t1 = grow_full(aligned, config(2), &st1);
  auto p1 = compute_profile(aligned);
  CHECK(prune_gain(t1, 1, p1) == doctest::Approx(0.0));
  CHECK(prune_gain(t1, 2, p1) == doctest::Approx(0.0));
  CHECK(prune_gain(t1, 0, p1) == doctest::Approx(1.0));

  // groups alternating: each pair node is perfectly mixed, its leaves are not
  auto mixed = testutil::one_dim(kX, {0, 1, 0, 1});
  PruneState st2;
  auto t2 = grow_full(mixed, config(2), &st2);
  auto p2 = compute_profile(mixed);
  CHECK(prune_gain(t2, 1, p2) == doctest::Approx(1.0));
  CHECK(prune_gain(t2, 2, p2) == doctest::Approx(1.0));

  // the incremental bookkeeping agrees with the recomputation
  for (std::int32_t id : {0, 1, 2}) {
    CHECK(st2.gain_of(t2, id) == doctest::Approx(prune_gain(t2, id, p2)));
  }
}

TEST_CASE("pruning collapses zero-gain candidates in id order") {
  auto ds = testutil::one_dim(kX, {0, 0, 1, 1});
  auto t = fit_ifct_p(ds, config(2));

  REQUIRE(t.leaf_count() == 2);
  CHECK(t.algorithm == "IFCT-P");
  // the root split survives; both pair nodes were collapsed
  REQUIRE(t.nodes[0].rule.has_value());
  CHECK(t.nodes[0].rule->threshold == doctest::Approx(2.55));
  CHECK(reachable(t) == std::set<std::int32_t>{0, 1, 2});

  // each remaining leaf holds one fully skewed pair
  CHECK(t.total_fairness == doctest::Approx(2.0));
  for (std::int32_t leaf : t.leaves) {
    CHECK(t.nodes[static_cast<std::size_t>(leaf)].samples.size() == 2);
  }
}

TEST_CASE("pruning prefers candidates whose leaves deviate more than they do") {
  auto ds = testutil::one_dim(kX, {0, 1, 0, 1});
  auto t = fit_ifct_p(ds, config(2));
  REQUIRE(t.leaf_count() == 2);
  CHECK(t.total_fairness == doctest::Approx(0.0));
  CHECK(t.nodes[0].rule->threshold == doctest::Approx(2.55));
}

TEST_CASE("a tree that grows to exactly k needs no pruning") {
  auto ds = testutil::one_dim(kX, {0, 1, 0, 1});
  auto t = fit_ifct_p(ds, config(4));
  CHECK(t.leaf_count() == 4);
  CHECK(t.split_trace.size() == 3);
}

TEST_CASE("too few distinct rows is a hard error") {
  auto ds = testutil::one_dim({1, 1, 2, 2}, {0, 1, 0, 1});
  CHECK_THROWS_WITH_AS(fit_ifct_p(ds, config(3)),
                       doctest::Contains("insufficient distinct structure"),
                       Error);
}

TEST_CASE("lambda plays no part in the pruned fit") {
  std::mt19937_64 rng(51);
  testutil::RandomSpec spec;
  spec.min_rows = 12;
  auto ds = testutil::random_dataset(rng, spec);
  REQUIRE(grow_full(ds, config(1)).leaf_count() >= 2);
  FitConfig a = config(2);
  FitConfig b = config(2);
  b.lambda = 1e6;
  auto ta = fit_ifct_p(ds, a);
  auto tb = fit_ifct_p(ds, b);
  REQUIRE(ta.split_trace.size() == tb.split_trace.size());
  for (std::size_t i = 0; i < ta.split_trace.size(); ++i) {
    CHECK(ta.split_trace[i].node == tb.split_trace[i].node);
    CHECK(ta.split_trace[i].rule == tb.split_trace[i].rule);
  }
  CHECK(reachable(ta) == reachable(tb));
}

TEST_CASE("random fits keep exactly k leaves contained in the full tree") {
  std::mt19937_64 rng(53);
  int done = 0;
  for (int trial = 0; trial < 40; ++trial) {
    testutil::RandomSpec spec;
    spec.min_rows = 6;
    spec.max_rows = 40;
    auto ds = testutil::random_dataset(rng, spec);

    auto full = grow_full(ds, config(1));
    if (full.leaf_count() < 2) continue;
    std::size_t k =
        2 + static_cast<std::size_t>(rng() % (full.leaf_count() - 1));

    auto t = fit_ifct_p(ds, config(k));
    CHECK(t.leaf_count() == k);

    // containment: every surviving internal node is the full tree's node
    // with the same id and the same rule
    for (std::int32_t id : reachable(t)) {
      const TreeNode& node = t.nodes[static_cast<std::size_t>(id)];
      if (node.is_leaf()) continue;
      const TreeNode& ref = full.nodes[static_cast<std::size_t>(id)];
      REQUIRE(ref.rule.has_value());
      CHECK(*node.rule == *ref.rule);
      CHECK(node.left == ref.left);
      CHECK(node.right == ref.right);
    }
    ++done;
  }
  CHECK(done >= 20);
}

}  // TEST_SUITE
