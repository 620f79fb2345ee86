#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include "kpdrl/aggregation.hpp"
#include "kpdrl/errors.hpp"
#include "kpdrl/features.hpp"
#include "kpdrl/generators.hpp"
#include "kpdrl/rng.hpp"

using namespace kpdrl;
using doctest::Approx;

namespace {

std::vector<int> labels_of(const Bins &bins, const std::vector<double> &values) {
  std::vector<int> out;
  for (double v : values) {
    out.push_back(bins.label(v));
  }
  return out;
}

// Table with N=1 whose only vr column is `col`.
std::vector<std::vector<double>> single_column_table(const std::vector<double> &col) {
  std::vector<std::vector<double>> table;
  for (double v : col) {
    std::vector<double> row(feature_width(1), 0.0);
    row[vr_feature(0)] = v;
    row[wr_feature(0)] = 0.25;
    table.push_back(row);
  }
  return table;
}

} // namespace

TEST_SUITE("aggregation") {

TEST_CASE("seven-value example splits into three subsets") {
  const std::vector<double> values{1, 2, 6, 3, 1, 2, 5};
  const auto split = quantile_split(values, 2);
  REQUIRE(split.subsets.size() == 3);
  CHECK(split.subsets[0] == std::vector<double>{1, 1, 2});
  CHECK(split.subsets[1] == std::vector<double>{2, 3, 5});
  CHECK(split.subsets[2] == std::vector<double>{6});
  CHECK(split.bins.boundaries == std::vector<double>{2, 5});
  // The value 2 spans the first two subsets and takes the lower label.
  CHECK(labels_of(split.bins, values) == std::vector<int>{0, 0, 2, 1, 0, 0, 1});
}

TEST_CASE("even split") {
  const std::vector<double> values{1, 2, 3, 4};
  const auto split = quantile_split(values, 1);
  CHECK(split.subsets[0] == std::vector<double>{1, 2});
  CHECK(split.subsets[1] == std::vector<double>{3, 4});
  CHECK(split.bins.boundaries == std::vector<double>{2});
  CHECK(labels_of(split.bins, values) == std::vector<int>{0, 0, 1, 1});
}

TEST_CASE("quantile split errors") {
  const std::vector<double> three{1, 2, 3};
  CHECK_THROWS_AS(quantile_split(std::vector<double>{}, 1), ParameterError);
  CHECK_THROWS_AS(quantile_split(three, 0), ParameterError);
  CHECK_THROWS_AS(quantile_split(three, 3), ParameterError);
  // ceil(4/3) = 2 twice uses all four values and leaves the last subset empty.
  CHECK_FALSE(split_feasible(4, 2));
  CHECK_THROWS_AS(quantile_split(std::vector<double>{1, 2, 3, 4}, 2), ParameterError);
  CHECK(split_feasible(7, 2));
  CHECK(split_feasible(2, 1));
  CHECK_FALSE(split_feasible(1, 1));
}

TEST_CASE("split reward examples") {
  CHECK(split_reward(std::vector<double>{1, 2, 6, 3, 1, 2, 5}, 2) == Approx(3.0));
  CHECK(split_reward(std::vector<double>{1, 2, 3, 4}, 1) == Approx(2.0));
  CHECK(split_reward(std::vector<double>{5, 5, 5, 5}, 1) == Approx(2.0));
  // One value spanning three subsets counts twice: 2*2*2 / (3*2).
  CHECK(split_reward(std::vector<double>{1, 7, 7, 7, 7, 9}, 2) == Approx(8.0 / 6.0));
}

TEST_CASE("bin-size law and duplicate-free boundaries") {
  Rng rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const auto m = static_cast<std::size_t>(rng.uniform_int(2, 60));
    std::vector<double> values(m);
    for (auto &v : values) {
      v = static_cast<double>(rng.uniform_int(0, 12)) / 4.0;
    }
    const int d = static_cast<int>(rng.uniform_int(1, 9));
    if (!split_feasible(m, d)) {
      CHECK_THROWS_AS(quantile_split(values, d), ParameterError);
      continue;
    }
    const auto split = quantile_split(values, d);
    const auto chunk = (m + static_cast<std::size_t>(d)) / (static_cast<std::size_t>(d) + 1);
    REQUIRE(split.subsets.size() == static_cast<std::size_t>(d) + 1);
    std::size_t total = 0;
    for (std::size_t j = 0; j < split.subsets.size(); ++j) {
      if (j + 1 < split.subsets.size()) {
        CHECK(split.subsets[j].size() == chunk);
      } else {
        CHECK(split.subsets[j].size() == m - chunk * static_cast<std::size_t>(d));
        CHECK(!split.subsets[j].empty());
      }
      total += split.subsets[j].size();
    }
    CHECK(total == m);
    const auto &b = split.bins.boundaries;
    CHECK(std::adjacent_find(b.begin(), b.end(), std::greater_equal<>()) == b.end());
    CHECK(b.size() <= static_cast<std::size_t>(d));
  }
}

TEST_CASE("mapping is monotone and clamps outside the fitted range") {
  const auto split = quantile_split(std::vector<double>{0.1, 0.4, 0.2, 0.9, 0.5, 0.7}, 2);
  const auto &bins = split.bins;
  CHECK(bins.label(-100.0) == 0);
  CHECK(bins.label(100.0) == bins.label_count() - 1);
  Rng rng(2);
  for (int k = 0; k < 1000; ++k) {
    const double a = rng.uniform01() * 2.0 - 0.5;
    const double b = rng.uniform01() * 2.0 - 0.5;
    if (a <= b) {
      CHECK(bins.label(a) <= bins.label(b));
    } else {
      CHECK(bins.label(a) >= bins.label(b));
    }
  }
}

TEST_CASE("fixed wr cuts") {
  const auto &wr = AggregationPolicy::wr_bins();
  CHECK(wr.boundaries == std::vector<double>{0.5, 1.0});
  CHECK(labels_of(wr, {0.3, 0.9, 1.4}) == std::vector<int>{0, 1, 2});
  CHECK(labels_of(wr, {0.5, 1.0, 0.0}) == std::vector<int>{0, 1, 0});
}

TEST_CASE("gamma zero reduces to a bandit over split rewards") {
  Rng rng(123);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> col(20);
    for (auto &v : col) {
      v = static_cast<double>(rng.uniform_int(0, 8));
    }
    AggregationHyperparams hp;
    hp.max_splits = 5;
    hp.gamma = 0.0;
    hp.epsilon = 1.0;
    hp.iterations = 20'000;
    const auto table = single_column_table(col);
    const auto q = learn_split_counts(table, hp, 9 + static_cast<std::uint64_t>(trial));
    double best_r = 0.0;
    for (int d = 1; d <= hp.max_splits; ++d) {
      const double r = split_feasible(col.size(), d) ? split_reward(col, d) : 0.0;
      CHECK(q.at(0, d) == Approx(r).epsilon(1e-9));
      best_r = std::max(best_r, r);
    }
    const auto policy = learn_aggregation(table, hp, 9 + static_cast<std::uint64_t>(trial));
    CHECK(split_reward(col, policy.d_star()[0]) >= best_r * (1.0 - 1e-9));
    CHECK(q.at(0, 5) == 0.0);
  }
}

TEST_CASE("learned policy on generated data") {
  const auto ds = gen_random_instances(100, 10, 100, 7);
  const auto table = feature_table(ds);
  AggregationHyperparams hp;
  hp.iterations = 5'000;
  const auto a = learn_aggregation(table, hp, 3);
  const auto b = learn_aggregation(table, hp, 3);
  CHECK(a == b);
  REQUIRE(a.max_items() == 10);

  for (std::size_t i = 0; i < 10; ++i) {
    const int d = a.d_star()[i];
    CHECK(d >= 1);
    CHECK(d <= hp.max_splits);
    std::vector<double> col;
    for (const auto &row : table) {
      col.push_back(row[vr_feature(i)]);
    }
    std::set<double> raw(col.begin(), col.end());
    std::set<int> labels;
    for (double v : col) {
      labels.insert(a.vr_bins()[i].label(v));
    }
    CHECK(labels.size() <= static_cast<std::size_t>(d) + 1);
    if (static_cast<std::size_t>(d) + 1 <= raw.size()) {
      CHECK(labels.size() <= raw.size());
    }
  }

  // Embedding: scalars pass through, wr uses the fixed cuts, vr gets labels.
  for (const auto &inst : ds.instances) {
    const auto fv = build_feature_vector(inst, 10);
    const auto e = embed_state(fv, a);
    REQUIRE(e.size() == fv.entries.size());
    for (std::size_t k = 0; k < kScalarFeatures; ++k) {
      CHECK(e[k] == fv.entries[k]);
    }
    for (std::size_t r = 0; r < 10; ++r) {
      CHECK(e[wr_feature(r)] == AggregationPolicy::wr_bins().label(fv.entries[wr_feature(r)]));
      CHECK(e[vr_feature(r)] == a.vr_bins()[r].label(fv.entries[vr_feature(r)]));
    }
  }
  CHECK_THROWS_AS(a.embed(std::vector<double>(feature_width(9), 0.0)), ParameterError);
}

TEST_CASE("policy file round trip") {
  const auto ds = gen_random_instances(60, 8, 50, 11);
  AggregationHyperparams hp;
  hp.iterations = 2'000;
  const auto p = learn_aggregation(feature_table(ds), hp, 5);
  std::stringstream ss;
  write_policy(p, ss);
  const auto q = read_policy(ss);
  CHECK(p == q);

  std::stringstream bad("kpdrl-aggregation 1\nN 1\n5 2 0.1 0.2\n6 2 0.4 1\n");
  CHECK_THROWS_AS(read_policy(bad), ParseError);
  std::stringstream wrong_magic("something 1\nN 1\n");
  CHECK_THROWS_AS(read_policy(wrong_magic), ParseError);
}

TEST_CASE("empty table is rejected") {
  CHECK_THROWS_AS(learn_split_counts({}, AggregationHyperparams{}, 1), ParameterError);
}

} // TEST_SUITE
