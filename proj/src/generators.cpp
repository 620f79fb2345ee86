#include "kpdrl/generators.hpp"

#include <cmath>
#include <string>

#include "kpdrl/errors.hpp"
#include "kpdrl/rng.hpp"

namespace kpdrl {

namespace {

void require_counts(std::int64_t m, std::int64_t n) {
  if (m < 1) {
    throw ParameterError("M must be >= 1, got " + std::to_string(m));
  }
  if (n < 1) {
    throw ParameterError("N must be >= 1, got " + std::to_string(n));
  }
}

} // namespace

Dataset gen_random_instances(std::int64_t m, std::int64_t n, std::int64_t r, std::uint64_t seed) {
  require_counts(m, n);
  if (r < 10) {
    throw ParameterError("R must be >= 10, got " + std::to_string(r));
  }
  Dataset ds{Family::RI, GenParams{m, n, r, seed}, {}};
  ds.instances.reserve(static_cast<std::size_t>(m));
  for (std::int64_t p = 1; p <= m; ++p) {
    Rng rng(seed, static_cast<std::uint64_t>(p));
    const auto count = rng.uniform_int(1, n);
    std::vector<Item> items(static_cast<std::size_t>(count));
    for (auto &it : items) {
      it.value = rng.uniform_int(1, r);
      it.weight = rng.uniform_int(1, r);
    }
    const auto capacity = rng.uniform_int(r / 10, 3 * r);
    ds.instances.emplace_back(p, std::move(items), capacity, 1);
  }
  return ds;
}

Dataset gen_fixed_instances(std::int64_t m, std::int64_t n, std::uint64_t seed,
                            std::optional<double> capacity) {
  require_counts(m, n);
  std::int64_t scaled_capacity = 0;
  if (capacity) {
    if (!(*capacity > 0.0) || !std::isfinite(*capacity)) {
      throw ParameterError("FI capacity must be a positive real");
    }
    scaled_capacity = std::llround(*capacity * static_cast<double>(kFixedScale));
    if (scaled_capacity < 1) {
      throw ParameterError("FI capacity rounds to zero at scale 10^4");
    }
  } else if (n == 50) {
    scaled_capacity = 125'000;
  } else if (n == 300 || n == 500) {
    scaled_capacity = 375'000;
  } else {
    throw ParameterError("FI has preset capacities only for N in {50, 300, 500}; N=" +
                         std::to_string(n) + " needs an explicit capacity");
  }

  Dataset ds{Family::FI, GenParams{m, n, 0, seed}, {}};
  ds.instances.reserve(static_cast<std::size_t>(m));
  for (std::int64_t p = 1; p <= m; ++p) {
    Rng rng(seed, static_cast<std::uint64_t>(p));
    std::vector<Item> items(static_cast<std::size_t>(n));
    for (auto &it : items) {
      it.value = rng.uniform_int(1, kFixedScale - 1);
      it.weight = rng.uniform_int(1, kFixedScale - 1);
    }
    ds.instances.emplace_back(p, std::move(items), scaled_capacity, kFixedScale);
  }
  return ds;
}

Dataset gen_hard_instances(std::int64_t m, std::int64_t n, std::int64_t r, std::uint64_t seed) {
  require_counts(m, n);
  if (r < 10 || r % 10 != 0) {
    throw ParameterError("HI needs R >= 10 divisible by 10, got " + std::to_string(r));
  }
  Dataset ds{Family::HI, GenParams{m, n, r, seed}, {}};
  ds.instances.reserve(static_cast<std::size_t>(m));
  for (std::int64_t p = 1; p <= m; ++p) {
    Rng rng(seed, static_cast<std::uint64_t>(p));
    std::vector<Item> items(static_cast<std::size_t>(n));
    std::int64_t weight_sum = 0;
    for (auto &it : items) {
      it.weight = rng.uniform_int(1, r);
      it.value = it.weight + r / 10;
      weight_sum += it.weight;
    }
    // Small p with a light draw can floor to zero; capacity must stay >= 1.
    const auto capacity = std::max<std::int64_t>(1, p * weight_sum / (m + 1));
    ds.instances.emplace_back(p, std::move(items), capacity, 1);
  }
  return ds;
}

} // namespace kpdrl
