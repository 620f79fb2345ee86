#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "kpdrl/features.hpp"

namespace kpdrl {

/// Cut points of a discretized feature. A value maps to the index of the
/// first boundary >= value, or to boundaries.size() above the last one, so
/// a value equal to a boundary takes the lower label.
struct Bins {
  std::vector<double> boundaries; ///< strictly ascending

  int label(double value) const noexcept;
  int label_count() const noexcept { return static_cast<int>(boundaries.size()) + 1; }

  friend bool operator==(const Bins &, const Bins &) = default;
};

/// Result of splitting a column into d+1 near-equal-count subsets.
struct QuantileSplit {
  /// Sorted subsets; the first d hold ceil(M/(d+1)) values each.
  std::vector<std::vector<double>> subsets;
  /// Maxima of the first d subsets, deduplicated.
  Bins bins;
};

/// True if d splits of `m` values leave a non-empty last subset.
bool split_feasible(std::size_t m, int d) noexcept;

/// Throws ParameterError if values is empty, d < 1, or !split_feasible.
QuantileSplit quantile_split(std::span<const double> values, int d);

/// Split quality: prod(subset sizes) / ((d+1) * max(1, c)), where c sums,
/// over distinct values, the number of extra subsets the value appears in.
double split_reward(std::span<const double> values, int d);

struct AggregationHyperparams {
  int max_splits = 9;          ///< x: actions are d in 1..x
  double alpha = 0.1;          ///< Q-learning step size
  double gamma = 0.9;          ///< discount
  double epsilon = 0.1;        ///< exploration rate
  std::int64_t iterations = 50'000;
};

/// Q(vr_i, d) for item ranks i in [0, N) and d in [1, x], stored row-major
/// at [i * x + (d - 1)].
struct QTable {
  std::size_t n = 0;
  int max_splits = 0;
  std::vector<double> values;

  double at(std::size_t i, int d) const { return values[i * static_cast<std::size_t>(max_splits) + static_cast<std::size_t>(d - 1)]; }
  double &at(std::size_t i, int d) { return values[i * static_cast<std::size_t>(max_splits) + static_cast<std::size_t>(d - 1)]; }
  /// Best action for row i; lowest d on ties.
  int best_action(std::size_t i) const;
  double best_value(std::size_t i) const { return at(i, best_action(i)); }
};

/// Maps feature vectors to state embeddings: vr features through learned
/// quantile bins, wr features through the fixed cuts {0.5, 1.0}, and the
/// four scalar features unchanged.
class AggregationPolicy {
public:
  AggregationPolicy() = default;
  AggregationPolicy(std::vector<int> d_star, std::vector<Bins> vr_bins);

  std::size_t max_items() const noexcept { return d_star_.size(); }
  std::span<const int> d_star() const noexcept { return d_star_; }
  std::span<const Bins> vr_bins() const noexcept { return vr_bins_; }
  static const Bins &wr_bins();

  /// Throws ParameterError on a width mismatch.
  std::vector<double> embed(std::span<const double> features) const;
  /// Allocation-free variant; `out` must have the same width as `features`.
  void embed_into(std::span<const double> features, std::span<double> out) const;

  friend bool operator==(const AggregationPolicy &, const AggregationPolicy &) = default;

private:
  std::vector<int> d_star_;
  std::vector<Bins> vr_bins_;
};

std::vector<double> embed_state(const FeatureVector &fv, const AggregationPolicy &policy);

/// Tabular Q-learning over split counts. Split counts that would leave an
/// empty last subset earn reward 0.
QTable learn_split_counts(const std::vector<std::vector<double>> &table,
                          const AggregationHyperparams &hp, std::uint64_t seed);

/// learn_split_counts, then bins fitted on each vr column with its best d.
AggregationPolicy learn_aggregation(const std::vector<std::vector<double>> &table,
                                    const AggregationHyperparams &hp, std::uint64_t seed);

// Policy file:
//
//   kpdrl-aggregation 1
//   N <n>
//   <k> <d> <b1> ... <bm>      one line per vr and wr feature
//
// k is the 1-based position of the feature in the vector, d the split
// count, b the (deduplicated, m <= d) boundaries printed round-trip exact.
void write_policy(const AggregationPolicy &p, std::ostream &out);
void write_policy(const AggregationPolicy &p, const std::filesystem::path &path);
AggregationPolicy read_policy(std::istream &in);
AggregationPolicy read_policy(const std::filesystem::path &path);

} // namespace kpdrl
