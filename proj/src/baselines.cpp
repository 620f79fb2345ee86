#include "kpdrl/baselines.hpp"

#include <cstdint>
#include <string>
#include <vector>

#include "kpdrl/errors.hpp"

namespace kpdrl {

Solution greedy_solve(std::span<const Item> items, std::int64_t capacity) {
  std::vector<std::size_t> chosen;
  std::int64_t left = capacity;
  for (auto i : ratio_order(items)) {
    if (items[i].weight <= left) {
      chosen.push_back(i);
      left -= items[i].weight;
    }
  }
  return make_solution(items, std::move(chosen));
}

Solution greedy_solve(const KpInstance &inst) { return greedy_solve(inst.items(), inst.capacity()); }

Solution dp_solve(std::span<const Item> items, std::int64_t capacity, std::size_t memory_budget) {
  if (capacity < 0) {
    throw ParameterError("capacity must be >= 0");
  }
  const auto cells = static_cast<std::size_t>(capacity) + 1;
  const std::size_t words_per_row = (cells + 63) / 64;
  const std::size_t needed = cells * sizeof(std::int64_t) + items.size() * words_per_row * 8;
  if (needed > memory_budget) {
    throw ResourceError("DP table needs " + std::to_string(needed) + " bytes, budget is " +
                        std::to_string(memory_budget) +
                        "; use brute force for small n or raise the budget");
  }

  std::vector<std::int64_t> best(cells, 0);
  std::vector<std::uint64_t> take(items.size() * words_per_row, 0);
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto w = items[i].weight;
    const auto v = items[i].value;
    if (w > capacity) {
      continue;
    }
    auto *row = take.data() + i * words_per_row;
    for (auto c = static_cast<std::size_t>(capacity); c >= static_cast<std::size_t>(w); --c) {
      const auto with = best[c - static_cast<std::size_t>(w)] + v;
      if (with > best[c]) {
        best[c] = with;
        row[c / 64] |= std::uint64_t{1} << (c % 64);
      }
    }
  }

  std::vector<std::size_t> chosen;
  auto c = static_cast<std::size_t>(capacity);
  for (std::size_t i = items.size(); i-- > 0;) {
    if ((take[i * words_per_row + c / 64] >> (c % 64)) & 1U) {
      chosen.push_back(i);
      c -= static_cast<std::size_t>(items[i].weight);
    }
  }
  auto sol = make_solution(items, std::move(chosen));
  if (sol.total_value != best[static_cast<std::size_t>(capacity)]) {
    throw IntegrityError("DP reconstruction disagrees with table value");
  }
  return sol;
}

Solution dp_solve(const KpInstance &inst, std::size_t memory_budget) {
  return dp_solve(inst.items(), inst.capacity(), memory_budget);
}

namespace {

struct Enumerator {
  std::span<const Item> items;
  std::uint32_t best_mask = 0;
  std::int64_t best_value = -1;

  void visit(std::size_t i, std::uint32_t mask, std::int64_t value, std::int64_t left) {
    if (i == items.size()) {
      if (value > best_value) {
        best_value = value;
        best_mask = mask;
      }
      return;
    }
    visit(i + 1, mask, value, left);
    if (items[i].weight <= left) {
      visit(i + 1, mask | (std::uint32_t{1} << i), value + items[i].value,
            left - items[i].weight);
    }
  }
};

} // namespace

Solution brute_force_solve(std::span<const Item> items, std::int64_t capacity) {
  if (items.size() > kBruteForceMaxItems) {
    throw ParameterError("brute force supports at most 25 items, got " +
                         std::to_string(items.size()));
  }
  if (capacity < 0) {
    throw ParameterError("capacity must be >= 0");
  }
  Enumerator e{items};
  e.visit(0, 0, 0, capacity);
  std::vector<std::size_t> chosen;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if ((e.best_mask >> i) & 1U) {
      chosen.push_back(i);
    }
  }
  return make_solution(items, std::move(chosen));
}

Solution brute_force_solve(const KpInstance &inst) {
  return brute_force_solve(inst.items(), inst.capacity());
}

} // namespace kpdrl
