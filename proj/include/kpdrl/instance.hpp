#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kpdrl {

/// One knapsack item, in the scaled integer units of its instance.
struct Item {
  std::int64_t value = 0;
  std::int64_t weight = 1;

  friend bool operator==(const Item &, const Item &) = default;
};

/// An immutable 0-1 knapsack instance.
///
/// Values, weights and capacity are integers interpreted as rationals with
/// the power-of-ten denominator `scale()`. Integer storage keeps the exact
/// DP oracle exact for the real-valued FI family.
class KpInstance {
public:
  /// Throws ParameterError unless id >= 1, items non-empty, every weight
  /// >= 1, every value >= 0, capacity >= 1 and scale a power of ten.
  KpInstance(std::int64_t id, std::vector<Item> items, std::int64_t capacity,
             std::int64_t scale = 1);

  std::int64_t id() const noexcept { return id_; }
  std::span<const Item> items() const noexcept { return items_; }
  std::size_t size() const noexcept { return items_.size(); }
  const Item &item(std::size_t i) const { return items_.at(i); }
  std::int64_t capacity() const noexcept { return capacity_; }
  std::int64_t scale() const noexcept { return scale_; }

  /// Converts a scaled quantity of this instance to real units.
  double unscale(std::int64_t q) const noexcept {
    return static_cast<double>(q) / static_cast<double>(scale_);
  }

  friend bool operator==(const KpInstance &, const KpInstance &) = default;

private:
  std::int64_t id_;
  std::vector<Item> items_;
  std::int64_t capacity_;
  std::int64_t scale_;
};

enum class Family { RI, FI, HI };

std::string_view family_name(Family f) noexcept;
std::optional<Family> parse_family(std::string_view name) noexcept;

/// Generator parameters recorded in the dataset header. `r` is 0 for FI.
struct GenParams {
  std::int64_t m = 0;
  std::int64_t n = 0;
  std::int64_t r = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const GenParams &, const GenParams &) = default;
};

/// M instances with ids 1..M, each with at most N items.
struct Dataset {
  Family family = Family::RI;
  GenParams params;
  std::vector<KpInstance> instances;

  /// Maximum item count the dataset admits (the N of the generator).
  std::size_t max_items() const noexcept { return static_cast<std::size_t>(params.n); }

  /// Throws ParameterError if ids are not exactly 1..M in order, any
  /// instance exceeds N items, or M disagrees with the instance count.
  void validate() const;

  friend bool operator==(const Dataset &, const Dataset &) = default;
};

/// A selected subset of an instance's items (indices into items()).
struct Solution {
  std::vector<std::size_t> selected;
  std::int64_t total_value = 0;
  std::int64_t total_weight = 0;

  friend bool operator==(const Solution &, const Solution &) = default;
};

/// Builds a Solution from indices, computing the totals. Indices are sorted.
Solution make_solution(std::span<const Item> items, std::vector<std::size_t> selected);

/// True if the totals match the selected items, indices are unique and in
/// range, and the weight fits `capacity`.
bool is_feasible(std::span<const Item> items, std::int64_t capacity, const Solution &s);

/// Strict order "a has a higher value/weight ratio than b", ties broken by
/// the lower index. Compares cross products exactly.
bool ratio_before(const Item &a, std::size_t ia, const Item &b, std::size_t ib) noexcept;

/// Item indices sorted by ratio_before.
std::vector<std::size_t> ratio_order(std::span<const Item> items);

} // namespace kpdrl
