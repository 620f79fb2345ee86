#include "kpdrl/a2c.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kpdrl/errors.hpp"
#include "kpdrl/features.hpp"
#include "kpdrl/rng.hpp"

namespace kpdrl {

RmsProp::RmsProp(std::size_t size, RmsPropConfig config)
    : config_(config), square_avg_(size, 0.0) {}

void RmsProp::step(std::span<double> params, std::span<const double> grad) {
  if (params.size() != square_avg_.size() || grad.size() != square_avg_.size()) {
    throw DimensionError("optimizer state does not match parameter count");
  }
  const double decay = config_.decay;
  const double lr = config_.learning_rate;
  const double eps = config_.epsilon;
  constexpr double tiny = std::numeric_limits<double>::min();
  for (std::size_t k = 0; k < params.size(); ++k) {
    const double g = grad[k];
    const double s = decay * square_avg_[k] + (1.0 - decay) * g * g;
    // Accumulators of parameters that never see a gradient decay towards
    // zero; subnormal values make every later step many times slower.
    square_avg_[k] = s < tiny ? 0.0 : s;
    params[k] -= lr * g / (std::sqrt(square_avg_[k]) + eps);
  }
}

ActorCritic ActorCritic::create(std::size_t max_items, const NetworkConfig &config,
                                std::uint64_t seed) {
  if (max_items < 1) {
    throw DimensionError("N must be >= 1");
  }
  std::vector<std::size_t> policy_dims{feature_width(max_items)};
  policy_dims.insert(policy_dims.end(), config.hidden.begin(), config.hidden.end());
  auto value_dims = policy_dims;
  policy_dims.push_back(max_items);
  value_dims.push_back(1);

  Rng policy_rng(seed, 1);
  Rng value_rng(seed, 2);
  ActorCritic ac;
  ac.policy = Mlp::xavier(policy_dims, Head::Softmax, policy_rng, config.policy_output_gain);
  ac.value = Mlp::xavier(value_dims, Head::Linear, value_rng, config.value_output_gain);
  ac.policy_opt = RmsProp(ac.policy.params().size(), config.optimizer);
  ac.value_opt = RmsProp(ac.value.params().size(), config.optimizer);
  return ac;
}

void policy_loss_logit_grad(std::span<const double> probs, std::size_t action, double advantage,
                            double entropy_coef, std::span<double> out) {
  const double h = entropy(probs);
  for (std::size_t k = 0; k < probs.size(); ++k) {
    const double p = probs[k];
    // -A (e_a - p)  and  -beta dH/dz with dH/dz_k = -p_k (log p_k + H)
    double g = advantage * (p - (k == action ? 1.0 : 0.0));
    if (p > 0.0) {
      g += entropy_coef * p * (std::log(p) + h);
    }
    out[k] = g;
  }
}

double policy_loss(const Mlp &policy, std::span<const double> state, std::size_t action,
                   double advantage, double entropy_coef) {
  Activations acts;
  forward(policy, state, acts);
  return -advantage * log_prob(policy, state, action) - entropy_coef * entropy(acts.probs);
}

namespace {

bool all_finite(std::span<const double> xs) {
  return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

[[noreturn]] void numeric_failure(const char *what, const Transition &t, const UpdateStats &s) {
  std::ostringstream msg;
  msg << "non-finite " << what << " in A2C update (action " << t.action + 1 << ", reward "
      << t.reward << ", V(s) " << s.value << ", V(s') " << s.next_value << ", advantage "
      << s.advantage << ")";
  throw NumericError(msg.str());
}

} // namespace

UpdateStats a2c_update(ActorCritic &ac, const Transition &t, const A2cConfig &config,
                       A2cWorkspace &ws) {
  if (t.action >= ac.policy.output_size()) {
    throw DimensionError("action index out of range for the policy network");
  }
  if (!(config.gamma >= 0.0 && config.gamma <= 1.0)) {
    throw ParameterError("gamma must lie in [0, 1]");
  }
  const bool cached = !ws.policy_acts.layers.empty() &&
                      std::equal(t.state.begin(), t.state.end(),
                                 ws.policy_acts.layers.front().begin(),
                                 ws.policy_acts.layers.front().end());
  if (!cached) {
    forward(ac.policy, t.state, ws.policy_acts);
  }
  forward(ac.value, t.state, ws.value_acts);

  UpdateStats stats;
  stats.value = ws.value_acts.output()[0];
  if (!t.done) {
    forward(ac.value, t.next_state, ws.next_acts);
    stats.next_value = ws.next_acts.output()[0];
  }
  stats.advantage = t.reward + config.gamma * stats.next_value - stats.value;
  const double p = ws.policy_acts.probs[t.action];
  stats.log_prob = std::log(p);
  stats.entropy = entropy(ws.policy_acts.probs);
  if (!std::isfinite(stats.advantage) || !all_finite(ws.policy_acts.probs)) {
    numeric_failure("advantage", t, stats);
  }

  ws.output_grad.resize(ac.policy.output_size());
  policy_loss_logit_grad(ws.policy_acts.probs, t.action, stats.advantage, config.entropy_coef,
                         ws.output_grad);
  backward(ac.policy, ws.policy_acts, ws.output_grad, ws.grad);
  if (!all_finite(ws.grad)) {
    numeric_failure("policy gradient", t, stats);
  }
  ac.policy_opt.step(ac.policy.params(), ws.grad);

  // d/dtheta_v of (target - V(s))^2 / 2 with the target held fixed.
  const double value_grad = -stats.advantage;
  backward(ac.value, ws.value_acts, std::span<const double>(&value_grad, 1), ws.grad);
  if (!all_finite(ws.grad)) {
    numeric_failure("value gradient", t, stats);
  }
  ac.value_opt.step(ac.value.params(), ws.grad);

  // Parameters changed; the cached forward pass is stale.
  ws.policy_acts.layers.clear();
  return stats;
}

} // namespace kpdrl
