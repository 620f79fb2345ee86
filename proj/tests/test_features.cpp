#include <doctest.h>

#include <algorithm>
#include <vector>

#include "kpdrl/errors.hpp"
#include "kpdrl/features.hpp"
#include "kpdrl/generators.hpp"
#include "kpdrl/rng.hpp"

using namespace kpdrl;
using doctest::Approx;

TEST_SUITE("features") {

TEST_CASE("normalization formulas") {
  const auto a = normalize(std::vector<Item>{{6, 2}}, 3, 1);
  CHECK(a[0].vr == Approx(1.0));
  CHECK(a[0].wr == Approx(2.0 / 3.0));

  const auto b = normalize(std::vector<Item>{{5, 5}}, 1, 1);
  CHECK(b[0].vr == Approx(1.0));
  CHECK(b[0].wr == Approx(5.0));

  // Scaling v, w and W by 10 shrinks vr tenfold and leaves wr alone.
  const auto c = normalize(std::vector<Item>{{60, 20}}, 30, 1);
  CHECK(c[0].vr == Approx(a[0].vr / 10.0));
  CHECK(c[0].wr == a[0].wr);

  CHECK_THROWS_AS(normalize(std::vector<Item>{{1, 1}}, 0, 1), ParameterError);
}

TEST_CASE("normalization works on unscaled values") {
  // 0.6 / (0.2 * 0.3) = 10 at scale 10.
  const auto n = normalize(std::vector<Item>{{6, 2}}, 3, 10);
  CHECK(n[0].vr == Approx(10.0));
  CHECK(n[0].wr == Approx(2.0 / 3.0));
}

TEST_CASE("worked feature vector") {
  const KpInstance inst(1, {{4, 2}, {9, 3}}, 10);
  const auto fv = build_feature_vector(inst, 3);
  const std::vector<double> expected{2, 10, 0.5, 0.5, 0.3, 0.3, 0.2, 0.2, 0, 0};
  REQUIRE(fv.entries.size() == expected.size());
  for (std::size_t k = 0; k < expected.size(); ++k) {
    CHECK(fv.entries[k] == Approx(expected[k]).epsilon(1e-12));
  }
  CHECK(fv.item_ranks == std::vector<std::size_t>{1, 0});
}

TEST_CASE("empty and full item blocks") {
  const KpInstance inst(1, {{4, 2}, {9, 3}, {1, 1}}, 10);
  const auto empty = build_feature_vector(inst, std::vector<std::size_t>{}, 7, 3);
  CHECK(empty.entries[kCountFeature] == 0.0);
  CHECK(empty.entries[kCapacityFeature] == 7.0);
  for (std::size_t k = kValueSumFeature; k < empty.entries.size(); ++k) {
    CHECK(empty.entries[k] == 0.0);
  }
  const auto full = build_feature_vector(inst, 3);
  for (std::size_t r = 0; r < 3; ++r) {
    CHECK(full.entries[vr_feature(r)] > 0.0);
    CHECK(full.entries[wr_feature(r)] > 0.0);
  }
  CHECK_THROWS_AS(build_feature_vector(inst, 2), ParameterError);
}

TEST_CASE("feature vector invariants on random instances") {
  const auto ds = gen_random_instances(200, 20, 100, 31);
  for (const auto &inst : ds.instances) {
    const auto fv = build_feature_vector(inst, 20);
    const auto n = inst.size();
    REQUIRE(fv.entries.size() == feature_width(20));
    CHECK(fv.entries[kCountFeature] == static_cast<double>(n));

    // item_ranks is a permutation of the items.
    auto ranks = fv.item_ranks;
    std::sort(ranks.begin(), ranks.end());
    for (std::size_t i = 0; i < n; ++i) {
      REQUIRE(ranks[i] == i);
    }

    // Applying the permutation to the normalized items reproduces the block.
    const auto norm = normalize(inst);
    double sv = 0.0;
    double sw = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      CHECK(fv.entries[vr_feature(r)] == norm[fv.item_ranks[r]].vr);
      CHECK(fv.entries[wr_feature(r)] == norm[fv.item_ranks[r]].wr);
      if (r > 0) {
        CHECK(fv.entries[vr_feature(r - 1)] >= fv.entries[vr_feature(r)]);
      }
      sv += norm[r].vr;
      sw += norm[r].wr;
    }
    CHECK(fv.entries[kValueSumFeature] == Approx(sv).epsilon(1e-12));
    CHECK(fv.entries[kWeightSumFeature] == Approx(sw).epsilon(1e-12));
    for (std::size_t r = n; r < 20; ++r) {
      CHECK(fv.entries[vr_feature(r)] == 0.0);
      CHECK(fv.entries[wr_feature(r)] == 0.0);
    }
  }
}

TEST_CASE("rebuilding from an already sorted instance gives the same entries") {
  const auto ds = gen_random_instances(50, 15, 100, 12);
  for (const auto &inst : ds.instances) {
    const auto fv = build_feature_vector(inst, 15);
    std::vector<Item> sorted;
    for (auto i : fv.item_ranks) {
      sorted.push_back(inst.item(i));
    }
    const KpInstance resorted(inst.id(), sorted, inst.capacity(), inst.scale());
    CHECK(build_feature_vector(resorted, 15).entries == fv.entries);
  }
}

TEST_CASE("uniformly scaled weights and capacity give identical wr blocks") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Item> items(static_cast<std::size_t>(rng.uniform_int(1, 10)));
    for (auto &it : items) {
      it = {rng.uniform_int(1, 100), rng.uniform_int(1, 100)};
    }
    const auto cap = rng.uniform_int(1, 300);
    const auto k = rng.uniform_int(2, 1000);
    auto scaled = items;
    for (auto &it : scaled) {
      it.weight *= k;
    }
    const auto a = build_feature_vector(KpInstance(1, items, cap), 10);
    const auto b = build_feature_vector(KpInstance(1, scaled, cap * k), 10);
    for (std::size_t r = 0; r < 10; ++r) {
      REQUIRE(a.entries[wr_feature(r)] == b.entries[wr_feature(r)]);
    }
  }
}

} // TEST_SUITE
