#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "kpdrl/mlp.hpp"

namespace kpdrl {

struct RmsPropConfig {
  double learning_rate = 7e-4;
  double decay = 0.99;
  double epsilon = 1e-5;

  friend bool operator==(const RmsPropConfig &, const RmsPropConfig &) = default;
};

/// RMSProp: s = decay * s + (1 - decay) * g^2;  p -= lr * g / (sqrt(s) + eps).
/// Subnormal accumulators are flushed to zero.
class RmsProp {
public:
  RmsProp() = default;
  RmsProp(std::size_t size, RmsPropConfig config);

  void step(std::span<double> params, std::span<const double> grad);

  const RmsPropConfig &config() const noexcept { return config_; }
  std::span<const double> accumulators() const noexcept { return square_avg_; }
  std::span<double> accumulators() noexcept { return square_avg_; }

  friend bool operator==(const RmsProp &, const RmsProp &) = default;

private:
  RmsPropConfig config_;
  std::vector<double> square_avg_;
};

struct NetworkConfig {
  std::vector<std::size_t> hidden{64, 64};
  RmsPropConfig optimizer;
  /// Output-layer init scale for the policy; small keeps the first
  /// distributions close to uniform.
  double policy_output_gain = 0.01;
  double value_output_gain = 1.0;
};

/// Policy network (2N+4 -> hidden -> N, softmax), value network
/// (2N+4 -> hidden -> 1) and one optimizer for each.
struct ActorCritic {
  Mlp policy;
  Mlp value;
  RmsProp policy_opt;
  RmsProp value_opt;

  static ActorCritic create(std::size_t max_items, const NetworkConfig &config, std::uint64_t seed);

  std::size_t max_items() const noexcept { return policy.output_size(); }

  friend bool operator==(const ActorCritic &, const ActorCritic &) = default;
};

struct A2cConfig {
  double gamma = 0.99;
  /// Weight of the entropy bonus; 0 gives the plain actor-critic gradient.
  double entropy_coef = 0.01;
};

/// One step of experience. `action` is a 0-based output index.
struct Transition {
  std::span<const double> state;
  std::size_t action = 0;
  double reward = 0.0;
  std::span<const double> next_state;
  bool done = false;
};

struct UpdateStats {
  double value = 0.0;      ///< V(s) before the update
  double next_value = 0.0; ///< V(s'), 0 when done
  double advantage = 0.0;  ///< r + gamma V(s') - V(s)
  double log_prob = 0.0;
  double entropy = 0.0;
};

/// Scratch buffers reused across updates.
struct A2cWorkspace {
  Activations policy_acts;
  Activations value_acts;
  Activations next_acts;
  std::vector<double> output_grad;
  std::vector<double> grad;
};

/// Policy loss -A log pi(a|s) - beta H(pi(.|s)).
double policy_loss(const Mlp &policy, std::span<const double> state, std::size_t action,
                   double advantage, double entropy_coef);

/// dL/dlogits of policy_loss for a given distribution.
void policy_loss_logit_grad(std::span<const double> probs, std::size_t action, double advantage,
                            double entropy_coef, std::span<double> out);

/// One-step advantage actor-critic update. The policy ascends
/// A * grad log pi(a|s) (plus the entropy bonus); the value network descends
/// the semi-gradient of (r + gamma V(s') - V(s))^2 / 2. Both use their
/// RMSProp optimizer. If `ws.policy_acts` already holds a forward pass on
/// `t.state` it is reused. Throws NumericError on non-finite quantities.
UpdateStats a2c_update(ActorCritic &ac, const Transition &t, const A2cConfig &config,
                       A2cWorkspace &ws);

} // namespace kpdrl
