#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "kpdrl/features.hpp"
#include "kpdrl/instance.hpp"

namespace kpdrl {

/// 1-based rank of an item in the current descending-vr order. Ranks past
/// the number of remaining items are legal actions that select nothing.
struct ActionIndex {
  std::size_t rank = 1;
};

/// Partial episode on one instance.
struct EnvState {
  /// Original indices of items not yet removed, in descending v/w order.
  std::vector<std::size_t> remaining;
  /// Original indices of accepted items, in acceptance order.
  std::vector<std::size_t> accepted;
  std::int64_t capacity_left = 0;
  std::int64_t ow = 0;
  std::int64_t ov = 0;
  std::size_t steps = 0;
  bool done = false;

  friend bool operator==(const EnvState &, const EnvState &) = default;
};

enum class StepOutcome { Accepted, TooHeavy, Undefined };

struct StepResult {
  double reward = 0.0;
  bool done = false;
  StepOutcome outcome = StepOutcome::Undefined;
};

/// Sequential item selection on one instance.
///
///   rank <= n', w <= W'   reward  v, item packed, W' -= w
///   rank <= n', w >  W'   reward -w, item dropped, W' unchanged
///   rank >  n'            reward -W', nothing changes
///
/// Rewards are divided by the instance capacity W_P unless `raw_rewards`,
/// in which case they are in unscaled real units. An episode ends when no
/// item remains, the knapsack is exactly full, or after 2N steps.
class KnapsackEnv {
public:
  /// Throws ParameterError if the instance has more than `max_items` items.
  KnapsackEnv(const KpInstance &inst, std::size_t max_items, bool raw_rewards = false);

  const KpInstance &instance() const noexcept { return *inst_; }
  std::size_t max_items() const noexcept { return max_items_; }
  std::size_t step_limit() const noexcept { return 2 * max_items_; }

  EnvState reset() const;

  /// Advances `state` in place. Throws UsageError if the episode is over and
  /// ParameterError for a rank outside [1, N].
  StepResult step(EnvState &state, ActionIndex action) const;

  /// Pure form: returns the successor and leaves `state` untouched.
  std::pair<EnvState, StepResult> next(const EnvState &state, ActionIndex action) const;

  /// Features of the remaining sub-instance. Requires capacity_left >= 1.
  FeatureVector features(const EnvState &state) const;

  Solution solution(const EnvState &state) const;

private:
  double scaled_reward(std::int64_t q) const noexcept;

  const KpInstance *inst_;
  std::size_t max_items_;
  bool raw_rewards_;
};

} // namespace kpdrl
