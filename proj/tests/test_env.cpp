#include <doctest.h>

#include <numeric>
#include <vector>

#include "kpdrl/baselines.hpp"
#include "kpdrl/env.hpp"
#include "kpdrl/errors.hpp"
#include "kpdrl/generators.hpp"
#include "kpdrl/rng.hpp"

using namespace kpdrl;
using doctest::Approx;

TEST_SUITE("kp-env") {

TEST_CASE("reset") {
  const KpInstance inst(1, {{4, 3}, {9, 12}, {1, 1}}, 10);
  const KnapsackEnv env(inst, 5);
  const auto s = env.reset();
  CHECK(s.capacity_left == 10);
  CHECK(s.remaining.size() == 3);
  CHECK(s.accepted.empty());
  CHECK(s.ow == 0);
  CHECK(s.ov == 0);
  CHECK(s.steps == 0);
  CHECK_FALSE(s.done);
  CHECK(env.reset() == s);
  CHECK(env.step_limit() == 10);
  CHECK_THROWS_AS(KnapsackEnv(inst, 2), ParameterError);
}

TEST_CASE("three reward cases") {
  // Ratio order is item 0 (4/3), item 2 (1), item 1 (3/4).
  const KpInstance inst(1, {{4, 3}, {9, 12}, {1, 1}}, 10);
  const KnapsackEnv raw(inst, 5, true);
  const KnapsackEnv scaled(inst, 5);

  SUBCASE("item fits") {
    auto s = raw.reset();
    REQUIRE(s.remaining.front() == 0);
    const auto r = raw.step(s, {1});
    CHECK(r.outcome == StepOutcome::Accepted);
    CHECK(r.reward == Approx(4.0));
    CHECK(s.capacity_left == 7);
    CHECK(s.ov == 4);
    CHECK(s.ow == 3);
    CHECK(s.remaining == std::vector<std::size_t>{2, 1});
    CHECK(scaled.next(scaled.reset(), {1}).second.reward == Approx(0.4));
  }
  SUBCASE("item too heavy") {
    auto s = raw.reset();
    REQUIRE(s.remaining.back() == 1);
    const auto r = raw.step(s, {3});
    CHECK(r.outcome == StepOutcome::TooHeavy);
    CHECK(r.reward == Approx(-12.0));
    CHECK(s.capacity_left == 10);
    CHECK(s.remaining == std::vector<std::size_t>{0, 2});
    CHECK(s.accepted.empty());
    CHECK(scaled.next(scaled.reset(), {3}).second.reward == Approx(-1.2));
  }
  SUBCASE("undefined rank") {
    auto s = raw.reset();
    const auto before = s;
    const auto r = raw.step(s, {5});
    CHECK(r.outcome == StepOutcome::Undefined);
    CHECK(r.reward == Approx(-10.0));
    CHECK(s.remaining == before.remaining);
    CHECK(s.capacity_left == 10);
    CHECK(s.steps == 1);
    CHECK(scaled.next(scaled.reset(), {5}).second.reward == Approx(-1.0));
  }
  SUBCASE("rank outside [1, N]") {
    auto s = raw.reset();
    CHECK_THROWS_AS(raw.step(s, {0}), ParameterError);
    CHECK_THROWS_AS(raw.step(s, {6}), ParameterError);
  }
}

TEST_CASE("raw rewards are in real units for scaled instances") {
  const KpInstance inst(1, {{5000, 2500}}, 10000, 10000);
  const KnapsackEnv raw(inst, 1, true);
  CHECK(raw.next(raw.reset(), {1}).second.reward == Approx(0.5));
  const KnapsackEnv scaled(inst, 1);
  CHECK(scaled.next(scaled.reset(), {1}).second.reward == Approx(0.5));
}

TEST_CASE("termination and usage after done") {
  const KpInstance full(1, {{3, 5}, {2, 5}}, 5);
  const KnapsackEnv env(full, 4);
  auto s = env.reset();
  const auto r = env.step(s, {1});
  CHECK(r.done);
  CHECK(s.capacity_left == 0);
  CHECK_THROWS_AS(env.step(s, {1}), UsageError);

  // Only undefined actions: the guard stops the episode at 2N steps.
  auto g = env.reset();
  std::size_t steps = 0;
  while (!g.done) {
    env.step(g, {4});
    ++steps;
  }
  CHECK(steps == env.step_limit());
}

TEST_CASE("random episodes respect invariants") {
  const auto ds = gen_random_instances(100, 12, 60, 19);
  Rng rng(4);
  for (const auto &inst : ds.instances) {
    const KnapsackEnv env(inst, 12, true);
    auto s = env.reset();
    bool only_defined = true;
    while (!s.done) {
      const auto rank = static_cast<std::size_t>(rng.uniform_int(1, 12));
      only_defined = only_defined && rank <= s.remaining.size();
      const auto cap_before = s.capacity_left;
      const auto r = env.step(s, {rank});
      switch (r.outcome) {
      case StepOutcome::Accepted:
        CHECK(r.reward >= 0.0);
        break;
      case StepOutcome::TooHeavy:
        CHECK(r.reward < 0.0);
        break;
      case StepOutcome::Undefined:
        if (cap_before > 0) {
          CHECK(r.reward < 0.0);
        } else {
          CHECK(r.reward <= 0.0);
        }
        break;
      }
      CHECK(s.capacity_left == inst.capacity() - s.ow);
      CHECK(s.steps <= env.step_limit());
    }
    if (only_defined) {
      CHECK(s.steps <= inst.size());
    }
    const auto sol = env.solution(s);
    CHECK(is_feasible(inst.items(), inst.capacity(), sol));
    CHECK(sol.total_value == s.ov);
    std::int64_t v = 0;
    for (auto i : s.accepted) {
      v += inst.item(i).value;
    }
    CHECK(v == s.ov);
    CHECK(s.ov <= dp_solve(inst.items(), inst.capacity()).total_value);
  }
}

TEST_CASE("always taking rank 1 reproduces greedy") {
  const auto ds = gen_random_instances(50, 20, 100, 8);
  for (const auto &inst : ds.instances) {
    const KnapsackEnv env(inst, 20);
    auto s = env.reset();
    while (!s.done) {
      env.step(s, {1});
    }
    CHECK(env.solution(s) == greedy_solve(inst));
  }
}

TEST_CASE("next is pure") {
  const KpInstance inst(1, {{4, 3}, {9, 12}}, 10);
  const KnapsackEnv env(inst, 2);
  const auto s = env.reset();
  const auto [s2, r] = env.next(s, {1});
  CHECK(s == env.reset());
  CHECK(s2.remaining.size() == 1);
  CHECK(env.features(s2).entries[0] == 1.0);
}

} // TEST_SUITE
