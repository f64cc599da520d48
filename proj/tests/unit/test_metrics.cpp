#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fairtree/error.hpp"
#include "fairtree/metrics.hpp"
#include "oracle.hpp"
#include "testutil.hpp"

using namespace fairtree;

namespace {

std::vector<std::int32_t> random_ids(std::mt19937_64& rng, std::size_t n,
                                     std::int32_t k) {
  std::vector<std::int32_t> out(n);
  for (auto& v : out) {
    v = static_cast<std::int32_t>(rng() % static_cast<std::uint64_t>(k));
  }
  return out;
}

GroupContingency make_gc(std::size_t k,
                         std::vector<std::vector<std::int64_t>> counts) {
  GroupContingency gc;
  gc.k = k;
  gc.counts = std::move(counts);
  for (const auto& attr : gc.counts) {
    const std::size_t m = attr.size() / k;
    std::vector<std::int64_t> globals(m, 0);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < m; ++j) globals[j] += attr[i * m + j];
    }
    gc.global_groups.push_back(std::move(globals));
  }
  gc.cluster_sizes.assign(k, 0);
  const std::size_t m0 = gc.counts[0].size() / k;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < m0; ++j) {
      gc.cluster_sizes[i] += gc.counts[0][i * m0 + j];
    }
  }
  return gc;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("accuracy takes the best injective relabeling") {
  using V = std::vector<std::int32_t>;
  CHECK(accuracy(V{1, 1, 0, 0}, V{0, 0, 1, 1}) == 1.0);
  CHECK(accuracy(V{0, 1, 0, 1}, V{0, 0, 1, 1}) == 0.5);
  CHECK(accuracy(V{0, 1, 2, 0}, V{0, 1, 2, 0}) == 1.0);
  // rectangular tables are padded, extra clusters match nothing
  CHECK(accuracy(V{0, 1, 2, 3}, V{0, 0, 1, 1}) == 0.5);
  CHECK(accuracy(V{0, 0, 0, 0}, V{0, 1, 2, 3}) == 0.25);
  CHECK_THROWS_AS(accuracy(V{0, 1}, V{0}), Error);
}

TEST_CASE("accuracy matches the brute-force injection maximum") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + rng() % 20;
    auto pred = random_ids(rng, n, 1 + static_cast<std::int32_t>(rng() % 4));
    auto truth = random_ids(rng, n, 1 + static_cast<std::int32_t>(rng() % 4));
    CHECK(accuracy(pred, truth) ==
          doctest::Approx(oracle::injection_accuracy(pred, truth)));

    // the map is injective, so at best each sample agrees and at worst the
    // largest single cell of the table is still counted
    double acc = accuracy(pred, truth);
    CHECK(acc > 0.0);
    CHECK(acc <= 1.0);

    // a constant prediction scores exactly the largest-class share
    std::vector<std::int64_t> sizes(5, 0);
    for (auto c : truth) sizes[static_cast<std::size_t>(c)]++;
    double largest = static_cast<double>(
                         *std::max_element(sizes.begin(), sizes.end())) /
                     static_cast<double>(n);
    std::vector<std::int32_t> constant(n, 0);
    CHECK(accuracy(constant, truth) == doctest::Approx(largest));
  }
}

TEST_CASE("nmi follows the arithmetic-mean normalization") {
  using V = std::vector<std::int32_t>;
  CHECK(nmi(V{0, 1, 0, 1}, V{1, 0, 1, 0}) == doctest::Approx(1.0));
  CHECK(nmi(V{0, 0, 0, 0}, V{0, 1, 0, 1}) == 0.0);
  CHECK(nmi(V{0, 1, 0, 1}, V{0, 0, 1, 1}) == doctest::Approx(0.0));

  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = 2 + rng() % 15;
    auto a = random_ids(rng, n, 3);
    auto b = random_ids(rng, n, 2);
    double ab = nmi(a, b);
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0 + 1e-12);
    CHECK(ab == doctest::Approx(nmi(b, a)));
  }
}

TEST_CASE("balance is the worst per-cluster minority share") {
  auto even = make_gc(2, {{2, 2, 3, 3}});
  CHECK(balance(even, 0) == doctest::Approx(0.5));

  auto skewed = make_gc(2, {{3, 1, 2, 2}});
  CHECK(balance(skewed, 0) == doctest::Approx(0.25));

  auto missing = make_gc(2, {{4, 0, 2, 2}});
  CHECK(balance(missing, 0) == 0.0);

  auto empty_cluster = make_gc(2, {{4, 2, 0, 0}});
  CHECK_THROWS_AS(balance(empty_cluster, 0), Error);
}

TEST_CASE("mnce is the worst cluster entropy over the global entropy") {
  auto uniform = make_gc(2, {{2, 2, 3, 3}});
  CHECK(mnce(uniform, 0) == doctest::Approx(1.0));

  // global (0.75, 0.25) with one pure cluster: minimum entropy is zero
  auto pure = make_gc(2, {{4, 0, 2, 2}});
  CHECK(mnce(pure, 0) == doctest::Approx(0.0));

  auto single_group = make_gc(2, {{3, 0, 2, 0}});
  CHECK_THROWS_AS(mnce(single_group, 0), Error);
}

TEST_CASE("group contingency marginals are consistent") {
  std::mt19937_64 rng(71);
  testutil::RandomSpec spec;
  spec.min_rows = 10;
  auto ds = testutil::random_dataset(rng, spec);
  const std::size_t k = 3;
  auto pred = random_ids(rng, ds.n, static_cast<std::int32_t>(k));
  auto gc = GroupContingency::from(pred, ds, k);

  REQUIRE(gc.counts.size() == ds.sens_attrs);
  for (std::size_t u = 0; u < ds.sens_attrs; ++u) {
    const std::size_t m = gc.global_groups[u].size();
    std::vector<std::int64_t> col(m, 0);
    for (std::size_t i = 0; i < k; ++i) {
      std::int64_t row_sum = 0;
      for (std::size_t j = 0; j < m; ++j) {
        row_sum += gc.counts[u][i * m + j];
        col[j] += gc.counts[u][i * m + j];
      }
      CHECK(row_sum == gc.cluster_sizes[i]);
    }
    CHECK(col == gc.global_groups[u]);
  }
}

TEST_CASE("the report averages the well-defined attributes") {
  auto gc = make_gc(2, {{2, 3, 3, 2}, {1, 4, 2, 3}});
  auto report = fairness_report(gc, {0.5, 0.5}, {"a", "b"});
  REQUIRE(report.per_attribute.size() == 2);
  CHECK(report.per_attribute[0].attribute == "a");
  CHECK(*report.per_attribute[0].bal == doctest::Approx(0.4));
  CHECK(*report.per_attribute[1].bal == doctest::Approx(0.2));
  REQUIRE(report.bal_average.has_value());
  CHECK(*report.bal_average == doctest::Approx(0.3));
  CHECK(report.mnce_average.has_value());

  // a degenerate attribute carries an error and drops out of the averages
  auto degenerate = make_gc(2, {{2, 3, 3, 2}, {5, 0, 5, 0}});
  auto partial = fairness_report(degenerate, {0.5, 0.5}, {"a", "b"});
  CHECK_FALSE(partial.per_attribute[1].bal.has_value());
  CHECK(partial.per_attribute[1].error.has_value());
  CHECK(*partial.bal_average == doctest::Approx(0.4));

  auto none = fairness_report(make_gc(1, {{5, 0}}), {1.0}, {"a"});
  CHECK_FALSE(none.bal_average.has_value());
}

}  // TEST_SUITE
