#include <doctest.h>

#include <sstream>

#include "kpdrl/dataset_io.hpp"
#include "kpdrl/errors.hpp"
#include "kpdrl/generators.hpp"
#include "kpdrl/rng.hpp"

using namespace kpdrl;

namespace {

std::string to_text(const Dataset &ds) {
  std::ostringstream out;
  write_dataset(ds, out);
  return out.str();
}

Dataset from_text(const std::string &text) {
  std::istringstream in(text);
  return read_dataset(in);
}

} // namespace

TEST_SUITE("kp-core") {

TEST_CASE("instance invariants are enforced") {
  CHECK_NOTHROW(KpInstance(1, {{0, 1}}, 1));
  CHECK_THROWS_AS(KpInstance(0, {{1, 1}}, 1), ParameterError);
  CHECK_THROWS_AS(KpInstance(1, {}, 1), ParameterError);
  CHECK_THROWS_AS(KpInstance(1, {{1, 0}}, 1), ParameterError);
  CHECK_THROWS_AS(KpInstance(1, {{-1, 1}}, 1), ParameterError);
  CHECK_THROWS_AS(KpInstance(1, {{1, 1}}, 0), ParameterError);
  CHECK_THROWS_AS(KpInstance(1, {{1, 1}}, 1, 20), ParameterError);
}

TEST_CASE("rng bounded draws stay in range and hit both ends") {
  Rng rng(123);
  bool lo = false;
  bool hi = false;
  for (int k = 0; k < 10'000; ++k) {
    const auto v = rng.uniform_int(3, 7);
    REQUIRE(v >= 3);
    REQUIRE(v <= 7);
    lo |= v == 3;
    hi |= v == 7;
  }
  CHECK(lo);
  CHECK(hi);
  CHECK(Rng(5, 1).next() != Rng(5, 2).next());
}

TEST_CASE("random instances respect the generator bounds") {
  const auto ds = gen_random_instances(3, 50, 100, 7);
  REQUIRE(ds.instances.size() == 3);
  for (const auto &inst : ds.instances) {
    CHECK(inst.size() >= 1);
    CHECK(inst.size() <= 50);
    CHECK(inst.capacity() >= 10);
    CHECK(inst.capacity() <= 300);
    CHECK(inst.scale() == 1);
    for (const auto &it : inst.items()) {
      CHECK(it.value >= 1);
      CHECK(it.value <= 100);
      CHECK(it.weight >= 1);
      CHECK(it.weight <= 100);
    }
  }
  const auto single = gen_random_instances(1, 1, 10, 0);
  CHECK(single.instances.at(0).size() == 1);
}

TEST_CASE("generators are deterministic per seed") {
  CHECK(to_text(gen_random_instances(20, 50, 100, 42)) ==
        to_text(gen_random_instances(20, 50, 100, 42)));
  CHECK(to_text(gen_random_instances(20, 50, 100, 42)) !=
        to_text(gen_random_instances(20, 50, 100, 43)));
  CHECK(gen_hard_instances(5, 10, 100, 1) == gen_hard_instances(5, 10, 100, 1));
  CHECK(gen_fixed_instances(5, 50, 1) == gen_fixed_instances(5, 50, 1));
}

TEST_CASE("instance streams do not depend on M") {
  // Stream keyed by (seed, p): instance 3 is the same in a dataset of 5 or 50.
  const auto small = gen_random_instances(5, 30, 100, 9);
  const auto large = gen_random_instances(50, 30, 100, 9);
  CHECK(small.instances[2] == large.instances[2]);
}

TEST_CASE("generator parameter errors") {
  CHECK_THROWS_AS(gen_random_instances(0, 50, 100, 1), ParameterError);
  CHECK_THROWS_AS(gen_random_instances(1, 0, 100, 1), ParameterError);
  CHECK_THROWS_AS(gen_random_instances(1, 5, 9, 1), ParameterError);
  CHECK_THROWS_AS(gen_fixed_instances(1, 40, 1), ParameterError);
  CHECK_NOTHROW(gen_fixed_instances(1, 40, 1, 10.0));
  CHECK_THROWS_AS(gen_hard_instances(1, 5, 105, 1), ParameterError);
}

TEST_CASE("fixed-capacity instances use the preset capacities at scale 10^4") {
  const auto d50 = gen_fixed_instances(2, 50, 1);
  for (const auto &inst : d50.instances) {
    CHECK(inst.capacity() == 125000);
    CHECK(inst.scale() == 10000);
    CHECK(inst.size() == 50);
  }
  const auto d500 = gen_fixed_instances(2, 500, 1);
  CHECK(d500.instances[0].capacity() == 375000);
  CHECK(gen_fixed_instances(1, 300, 1).instances[0].capacity() == 375000);

  const auto d = gen_fixed_instances(1, 50, 9);
  for (const auto &it : d.instances[0].items()) {
    CHECK(it.weight > 0);
    CHECK(it.weight < 10000);
    CHECK(it.value > 0);
    CHECK(it.value < 10000);
  }
}

TEST_CASE("hard instances correlate values and scale capacity with the id") {
  const auto ds = gen_hard_instances(1000, 50, 100, 3);
  for (const auto &inst : ds.instances) {
    CHECK(inst.size() == 50);
    std::int64_t sum = 0;
    for (const auto &it : inst.items()) {
      CHECK(it.value == it.weight + 10);
      sum += it.weight;
    }
    CHECK(inst.capacity() == std::max<std::int64_t>(1, inst.id() * sum / 1001));
  }
  // floor(2 * (4 + 7) / (3 + 1)) for the formula's worked case.
  CHECK(2 * (4 + 7) / (3 + 1) == 5);
  const auto small = gen_hard_instances(3, 2, 10, 5);
  const auto &p2 = small.instances[1];
  CHECK(p2.capacity() == 2 * (p2.item(0).weight + p2.item(1).weight) / 4);
}

TEST_CASE("fuzzed generator parameters always give valid datasets") {
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto m = rng.uniform_int(1, 8);
    const auto n = rng.uniform_int(1, 12);
    const auto r = 10 * rng.uniform_int(1, 50);
    const auto seed = rng.next();
    Dataset ds;
    switch (trial % 3) {
    case 0:
      ds = gen_random_instances(m, n, r + rng.uniform_int(0, 9), seed);
      break;
    case 1:
      ds = gen_fixed_instances(m, n, seed, 0.5 + rng.uniform01() * 5.0);
      break;
    default:
      ds = gen_hard_instances(m, n, r, seed);
      break;
    }
    REQUIRE_NOTHROW(ds.validate());
    REQUIRE(ds.instances.size() == static_cast<std::size_t>(m));
  }
}

TEST_CASE("dataset files round-trip") {
  for (const auto &ds : {gen_random_instances(30, 20, 100, 5), gen_fixed_instances(4, 50, 2),
                         gen_hard_instances(10, 8, 60, 8)}) {
    const auto text = to_text(ds);
    const auto back = from_text(text);
    CHECK(back == ds);
    CHECK(to_text(back) == text);
  }
}

TEST_CASE("malformed dataset files are rejected with a line number") {
  SUBCASE("negative weight") {
    try {
      from_text("#ri 2 3 10 1\n1 1 5 1 3 4\n2 1 5 1 3 -4\n");
      FAIL("expected a parse error");
    } catch (const ParseError &e) {
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("duplicate id") {
    try {
      from_text("#ri 2 3 10 1\n1 1 5 1 3 4\n1 1 5 1 3 4\n");
      FAIL("expected a parse error");
    } catch (const ParseError &e) {
      CHECK(e.line() == 3);
    }
  }
  CHECK_THROWS_AS(from_text(""), ParseError);
  CHECK_THROWS_AS(from_text("1 1 5 1 3 4\n"), ParseError);
  CHECK_THROWS_AS(from_text("#ri 1 3 10 1\n1 2 5 1 3 4\n"), ParseError);
  CHECK_THROWS_AS(from_text("#ri 1 3 10 1\n1 1 5 1 x 4\n"), ParseError);
  CHECK_THROWS_AS(from_text("#ri 2 3 10 1\n1 1 5 1 3 4\n"), ParseError);
  CHECK_THROWS_AS(from_text("#ri 1 1 10 1\n1 2 5 1 3 4 3 4\n"), ParseError);
  CHECK_THROWS_AS(from_text("#xx 1 3 10 1\n1 1 5 1 3 4\n"), ParseError);
}

} // TEST_SUITE
