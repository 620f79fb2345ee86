#include "kpdrl/env.hpp"

#include <string>

#include "kpdrl/errors.hpp"

namespace kpdrl {

KnapsackEnv::KnapsackEnv(const KpInstance &inst, std::size_t max_items, bool raw_rewards)
    : inst_(&inst), max_items_(max_items), raw_rewards_(raw_rewards) {
  if (inst.size() > max_items) {
    throw ParameterError("instance " + std::to_string(inst.id()) + " has " +
                         std::to_string(inst.size()) + " items; the model handles at most " +
                         std::to_string(max_items));
  }
}

EnvState KnapsackEnv::reset() const {
  EnvState s;
  s.remaining = ratio_order(inst_->items());
  s.capacity_left = inst_->capacity();
  return s;
}

double KnapsackEnv::scaled_reward(std::int64_t q) const noexcept {
  if (raw_rewards_) {
    return inst_->unscale(q);
  }
  return static_cast<double>(q) / static_cast<double>(inst_->capacity());
}

StepResult KnapsackEnv::step(EnvState &state, ActionIndex action) const {
  if (state.done) {
    throw UsageError("step called on a finished episode");
  }
  if (action.rank < 1 || action.rank > max_items_) {
    throw ParameterError("action rank " + std::to_string(action.rank) + " outside [1, " +
                         std::to_string(max_items_) + "]");
  }

  StepResult res;
  if (action.rank > state.remaining.size()) {
    res.outcome = StepOutcome::Undefined;
    res.reward = -scaled_reward(state.capacity_left);
  } else {
    const auto pos = state.remaining.begin() + static_cast<std::ptrdiff_t>(action.rank - 1);
    const auto idx = *pos;
    const auto &it = inst_->item(idx);
    if (it.weight <= state.capacity_left) {
      res.outcome = StepOutcome::Accepted;
      res.reward = scaled_reward(it.value);
      state.ow += it.weight;
      state.ov += it.value;
      state.capacity_left -= it.weight;
      state.accepted.push_back(idx);
    } else {
      res.outcome = StepOutcome::TooHeavy;
      res.reward = -scaled_reward(it.weight);
    }
    state.remaining.erase(pos);
  }
  ++state.steps;
  state.done =
      state.remaining.empty() || state.capacity_left == 0 || state.steps >= step_limit();
  res.done = state.done;
  return res;
}

std::pair<EnvState, StepResult> KnapsackEnv::next(const EnvState &state, ActionIndex action) const {
  EnvState copy = state;
  const auto res = step(copy, action);
  return {std::move(copy), res};
}

FeatureVector KnapsackEnv::features(const EnvState &state) const {
  return build_feature_vector(*inst_, state.remaining, state.capacity_left, max_items_);
}

Solution KnapsackEnv::solution(const EnvState &state) const {
  return make_solution(inst_->items(), state.accepted);
}

} // namespace kpdrl
