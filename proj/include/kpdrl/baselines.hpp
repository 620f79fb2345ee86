#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "kpdrl/instance.hpp"

namespace kpdrl {

/// Ratio greedy: scan items by non-increasing v/w (lower index first on
/// ties) and add each one that still fits.
Solution greedy_solve(std::span<const Item> items, std::int64_t capacity);
Solution greedy_solve(const KpInstance &inst);

/// Default ceiling on the DP decision table, in bytes.
inline constexpr std::size_t kDefaultDpBudget = std::size_t{1} << 30;

/// Exact 0-1 knapsack by dynamic programming over capacity.
///
/// Memory is one int64 row of capacity+1 cells plus n*(capacity+1) decision
/// bits. Throws ResourceError if that exceeds `memory_budget` bytes.
Solution dp_solve(std::span<const Item> items, std::int64_t capacity,
                  std::size_t memory_budget = kDefaultDpBudget);
Solution dp_solve(const KpInstance &inst, std::size_t memory_budget = kDefaultDpBudget);

inline constexpr std::size_t kBruteForceMaxItems = 25;

/// Exhaustive search over all subsets; a test oracle. Throws ParameterError
/// for more than 25 items.
Solution brute_force_solve(std::span<const Item> items, std::int64_t capacity);
Solution brute_force_solve(const KpInstance &inst);

} // namespace kpdrl
