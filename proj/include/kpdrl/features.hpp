#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "kpdrl/instance.hpp"

namespace kpdrl {

struct NormalizedItem {
  double vr = 0.0; ///< v / (w * W)
  double wr = 0.0; ///< w / W
  std::size_t origin_index = 0;
};

/// vr_i = v_i / (w_i * W) and wr_i = w_i / W on the unscaled values.
/// Throws ParameterError if `capacity` < 1.
std::vector<NormalizedItem> normalize(std::span<const Item> items, std::int64_t capacity,
                                      std::int64_t scale);
std::vector<NormalizedItem> normalize(const KpInstance &inst);

/// Offsets into FeatureVector::entries.
inline constexpr std::size_t kCountFeature = 0;
inline constexpr std::size_t kCapacityFeature = 1;
inline constexpr std::size_t kValueSumFeature = 2;
inline constexpr std::size_t kWeightSumFeature = 3;
inline constexpr std::size_t kScalarFeatures = 4;

/// Index of vr at 0-based rank r; wr follows at +1.
constexpr std::size_t vr_feature(std::size_t rank) noexcept { return kScalarFeatures + 2 * rank; }
constexpr std::size_t wr_feature(std::size_t rank) noexcept { return kScalarFeatures + 2 * rank + 1; }
constexpr std::size_t feature_width(std::size_t n) noexcept { return 2 * n + kScalarFeatures; }

/// (n, W, Sv, Sw, vr_1, wr_1, ..., vr_N, wr_N) with items in descending vr
/// order and zeros past the last item. Sv and Sw sum the normalized vr and
/// wr of the listed items; W is in real (unscaled) units.
struct FeatureVector {
  std::vector<double> entries;
  /// item_ranks[r] is the original index of the item at rank r.
  std::vector<std::size_t> item_ranks;

  std::size_t max_items() const noexcept { return (entries.size() - kScalarFeatures) / 2; }
};

/// Feature vector of the whole instance. Throws ParameterError if the
/// instance has more than `n` items.
FeatureVector build_feature_vector(const KpInstance &inst, std::size_t n);

/// Feature vector of the sub-instance made of `remaining` (original indices)
/// with capacity `capacity` (scaled units, >= 1).
FeatureVector build_feature_vector(const KpInstance &inst, std::span<const std::size_t> remaining,
                                   std::int64_t capacity, std::size_t n);

/// One row per instance of the dataset: the table aggregation is fitted on.
std::vector<std::vector<double>> feature_table(const Dataset &ds);

} // namespace kpdrl
