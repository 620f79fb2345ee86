#include "kpdrl/features.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "kpdrl/errors.hpp"

namespace kpdrl {

std::vector<NormalizedItem> normalize(std::span<const Item> items, std::int64_t capacity,
                                      std::int64_t scale) {
  if (capacity < 1) {
    throw ParameterError("normalization needs a positive capacity");
  }
  const auto cap = static_cast<double>(capacity);
  const auto s = static_cast<double>(scale);
  std::vector<NormalizedItem> out;
  out.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto &it = items[i];
    if (it.weight < 1) {
      throw ParameterError("normalization needs positive weights");
    }
    const auto w = static_cast<double>(it.weight);
    // (v/s) / ((w/s) * (W/s)) == v * s / (w * W)
    out.push_back({static_cast<double>(it.value) * s / (w * cap), w / cap, i});
  }
  return out;
}

std::vector<NormalizedItem> normalize(const KpInstance &inst) {
  return normalize(inst.items(), inst.capacity(), inst.scale());
}

FeatureVector build_feature_vector(const KpInstance &inst, std::span<const std::size_t> remaining,
                                   std::int64_t capacity, std::size_t n) {
  if (remaining.size() > n) {
    throw ParameterError("instance " + std::to_string(inst.id()) + " has " +
                         std::to_string(remaining.size()) + " items, model supports N=" +
                         std::to_string(n));
  }
  if (capacity < 1) {
    throw ParameterError("feature vector needs a positive capacity");
  }
  const auto items = inst.items();

  FeatureVector fv;
  fv.item_ranks.assign(remaining.begin(), remaining.end());
  // Descending vr is descending v/w since W is shared by all items.
  std::sort(fv.item_ranks.begin(), fv.item_ranks.end(), [&](std::size_t a, std::size_t b) {
    return ratio_before(items[a], a, items[b], b);
  });

  fv.entries.assign(feature_width(n), 0.0);
  const auto cap = static_cast<double>(capacity);
  const auto s = static_cast<double>(inst.scale());
  double value_sum = 0.0;
  double weight_sum = 0.0;
  for (std::size_t r = 0; r < fv.item_ranks.size(); ++r) {
    const auto &it = items[fv.item_ranks[r]];
    const auto w = static_cast<double>(it.weight);
    const double vr = static_cast<double>(it.value) * s / (w * cap);
    const double wr = w / cap;
    fv.entries[vr_feature(r)] = vr;
    fv.entries[wr_feature(r)] = wr;
    value_sum += vr;
    weight_sum += wr;
  }
  fv.entries[kCountFeature] = static_cast<double>(fv.item_ranks.size());
  fv.entries[kCapacityFeature] = cap / s;
  fv.entries[kValueSumFeature] = value_sum;
  fv.entries[kWeightSumFeature] = weight_sum;
  return fv;
}

FeatureVector build_feature_vector(const KpInstance &inst, std::size_t n) {
  std::vector<std::size_t> all(inst.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return build_feature_vector(inst, all, inst.capacity(), n);
}

std::vector<std::vector<double>> feature_table(const Dataset &ds) {
  std::vector<std::vector<double>> table;
  table.reserve(ds.instances.size());
  for (const auto &inst : ds.instances) {
    table.push_back(build_feature_vector(inst, ds.max_items()).entries);
  }
  return table;
}

} // namespace kpdrl
