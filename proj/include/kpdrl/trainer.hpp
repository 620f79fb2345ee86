#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "kpdrl/a2c.hpp"
#include "kpdrl/aggregation.hpp"
#include "kpdrl/instance.hpp"

namespace kpdrl {

enum class InstanceOrder { Cyclic, UniformRandom };
enum class ActionMode { Sample, Greedy };

/// The step budget used when TrainConfig::t_max is 0: 3N * 10^4.
std::int64_t default_t_max(std::size_t max_items) noexcept;

struct TrainConfig {
  std::int64_t t_max = 0; ///< 0 selects default_t_max(N)
  A2cConfig a2c;
  InstanceOrder order = InstanceOrder::UniformRandom;
  std::uint64_t seed = 0;
  bool raw_rewards = false;
  NetworkConfig network;
  /// Keep one per-step reward record every this many steps.
  std::int64_t step_log_every = 1000;
};

/// Canonical text of every setting that affects training except the
/// aggregation arm; equal for the two arms of an ablation.
std::string config_text(const TrainConfig &config, std::size_t max_items);

/// 64-bit FNV-1a of `text`, as 16 hex digits.
std::string fingerprint(std::string_view text);

struct StepRecord {
  std::int64_t t = 0;
  std::int64_t instance = 0;
  double reward = 0.0;

  friend bool operator==(const StepRecord &, const StepRecord &) = default;
};

struct EpisodeRecord {
  std::int64_t t = 0; ///< steps consumed when the episode ended
  std::int64_t instance = 0;
  double episode_value = 0.0; ///< real units
  double best_valbar = 0.0;   ///< mean best value over all M instances

  friend bool operator==(const EpisodeRecord &, const EpisodeRecord &) = default;
};

struct TrainLog {
  std::string shared_fingerprint; ///< fingerprint(config_text(...))
  std::string fingerprint;        ///< also covers the aggregation arm
  std::vector<StepRecord> steps;
  std::vector<EpisodeRecord> episodes;
  std::int64_t total_steps = 0;

  friend bool operator==(const TrainLog &, const TrainLog &) = default;
};

/// Best episode found per instance during training, indexed by id - 1.
struct BestSolutions {
  std::vector<Solution> solutions;

  std::int64_t value(std::int64_t id) const {
    return solutions.at(static_cast<std::size_t>(id - 1)).total_value;
  }
  std::vector<std::int64_t> values() const;
};

struct TrainResult {
  ActorCritic model;
  TrainLog log;
  BestSolutions best;
};

/// Network input for a feature vector: the aggregated embedding, or the raw
/// features when `aggregation` is null.
void state_input(std::span<const double> features, const AggregationPolicy *aggregation,
                 std::vector<double> &out);

/// Samples an index from `probs` with one uniform draw.
std::size_t sample_action(std::span<const double> probs, double u) noexcept;
/// Lowest index of the largest probability.
std::size_t greedy_action(std::span<const double> probs) noexcept;

/// Runs A2C episodes over the dataset until at least t_max steps were taken,
/// updating both networks after every step and keeping the best episode per
/// instance. `aggregation` null trains on raw features. Throws
/// DimensionError if the aggregation policy was fitted for another N.
TrainResult train(const Dataset &ds, const AggregationPolicy *aggregation,
                  const TrainConfig &config);

/// Decodes an instance with a trained policy. Greedy takes the most likely
/// action each step; Sample returns the best of the greedy rollout and
/// `episodes` sampled rollouts. Throws ParameterError if the instance has
/// more items than the model's N.
Solution solve_with_policy(const ActorCritic &model, const AggregationPolicy *aggregation,
                           const KpInstance &inst, ActionMode mode, std::size_t episodes = 64,
                           std::uint64_t seed = 0);

// Training log CSV: optional "# config <fingerprint> <shared> ..." line, a
// header "t,instance,episode_value,best_valbar", then one row per episode.
void write_train_log(const TrainLog &log, std::ostream &out);
void write_train_log(const TrainLog &log, const std::filesystem::path &path);
TrainLog read_train_log(std::istream &in);
TrainLog read_train_log(const std::filesystem::path &path);

} // namespace kpdrl
