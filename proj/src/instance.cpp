#include "kpdrl/instance.hpp"

#include <algorithm>
#include <numeric>

#include "kpdrl/errors.hpp"

namespace kpdrl {

namespace {

bool is_power_of_ten(std::int64_t s) {
  if (s < 1) {
    return false;
  }
  while (s % 10 == 0) {
    s /= 10;
  }
  return s == 1;
}

} // namespace

KpInstance::KpInstance(std::int64_t id, std::vector<Item> items, std::int64_t capacity,
                       std::int64_t scale)
    : id_(id), items_(std::move(items)), capacity_(capacity), scale_(scale) {
  if (id_ < 1) {
    throw ParameterError("instance id must be >= 1, got " + std::to_string(id_));
  }
  if (items_.empty()) {
    throw ParameterError("instance " + std::to_string(id_) + " has no items");
  }
  if (capacity_ < 1) {
    throw ParameterError("instance " + std::to_string(id_) + ": capacity must be >= 1");
  }
  if (!is_power_of_ten(scale_)) {
    throw ParameterError("scale must be a power of ten, got " + std::to_string(scale_));
  }
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (items_[i].weight < 1) {
      throw ParameterError("instance " + std::to_string(id_) + ": item " +
                           std::to_string(i + 1) + " has weight < 1");
    }
    if (items_[i].value < 0) {
      throw ParameterError("instance " + std::to_string(id_) + ": item " +
                           std::to_string(i + 1) + " has negative value");
    }
  }
}

std::string_view family_name(Family f) noexcept {
  switch (f) {
  case Family::RI:
    return "ri";
  case Family::FI:
    return "fi";
  case Family::HI:
    return "hi";
  }
  return "?";
}

std::optional<Family> parse_family(std::string_view name) noexcept {
  if (name == "ri" || name == "RI") {
    return Family::RI;
  }
  if (name == "fi" || name == "FI") {
    return Family::FI;
  }
  if (name == "hi" || name == "HI") {
    return Family::HI;
  }
  return std::nullopt;
}

void Dataset::validate() const {
  if (params.m != static_cast<std::int64_t>(instances.size())) {
    throw ParameterError("dataset header says M=" + std::to_string(params.m) + " but holds " +
                         std::to_string(instances.size()) + " instances");
  }
  if (params.n < 1) {
    throw ParameterError("dataset N must be >= 1");
  }
  for (std::size_t k = 0; k < instances.size(); ++k) {
    const auto &inst = instances[k];
    if (inst.id() != static_cast<std::int64_t>(k + 1)) {
      throw ParameterError("instance ids must be contiguous 1..M; position " +
                           std::to_string(k + 1) + " holds id " + std::to_string(inst.id()));
    }
    if (inst.size() > max_items()) {
      throw ParameterError("instance " + std::to_string(inst.id()) + " has " +
                           std::to_string(inst.size()) + " items, more than N=" +
                           std::to_string(params.n));
    }
  }
}

Solution make_solution(std::span<const Item> items, std::vector<std::size_t> selected) {
  std::sort(selected.begin(), selected.end());
  Solution s;
  for (auto i : selected) {
    s.total_value += items[i].value;
    s.total_weight += items[i].weight;
  }
  s.selected = std::move(selected);
  return s;
}

bool is_feasible(std::span<const Item> items, std::int64_t capacity, const Solution &s) {
  std::vector<bool> seen(items.size(), false);
  std::int64_t value = 0;
  std::int64_t weight = 0;
  for (auto i : s.selected) {
    if (i >= items.size() || seen[i]) {
      return false;
    }
    seen[i] = true;
    value += items[i].value;
    weight += items[i].weight;
  }
  return value == s.total_value && weight == s.total_weight && weight <= capacity;
}

bool ratio_before(const Item &a, std::size_t ia, const Item &b, std::size_t ib) noexcept {
  // v_a / w_a > v_b / w_b  <=>  v_a * w_b > v_b * w_a (weights positive).
  __extension__ using Wide = __int128;
  const auto lhs = static_cast<Wide>(a.value) * b.weight;
  const auto rhs = static_cast<Wide>(b.value) * a.weight;
  if (lhs != rhs) {
    return lhs > rhs;
  }
  return ia < ib;
}

std::vector<std::size_t> ratio_order(std::span<const Item> items) {
  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return ratio_before(items[a], a, items[b], b);
  });
  return order;
}

} // namespace kpdrl
