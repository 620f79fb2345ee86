#include "kpdrl/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kpdrl/errors.hpp"
#include "kpdrl/rng.hpp"

namespace kpdrl {

Mlp::Mlp(std::vector<std::size_t> dims, Head head) : dims_(std::move(dims)), head_(head) {
  if (dims_.size() < 2) {
    throw DimensionError("a network needs at least an input and an output layer");
  }
  if (std::any_of(dims_.begin(), dims_.end(), [](std::size_t d) { return d == 0; })) {
    throw DimensionError("layer widths must be positive");
  }
  if (head_ == Head::Linear && dims_.back() != 1) {
    // Linear heads are only used for the scalar value network.
    throw DimensionError("a linear head must have exactly one output");
  }
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
    offsets_.push_back(total);
    total += dims_[l] * dims_[l + 1] + dims_[l + 1];
  }
  params_.assign(total, 0.0);
}

Mlp Mlp::xavier(std::vector<std::size_t> dims, Head head, Rng &rng, double output_gain) {
  Mlp net(std::move(dims), head);
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    const auto fan_in = net.dims_[l];
    const auto fan_out = net.dims_[l + 1];
    double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    if (l + 1 == net.layer_count()) {
      bound *= output_gain;
    }
    auto *w = net.params_.data() + net.weight_offset(l);
    for (std::size_t k = 0; k < fan_in * fan_out; ++k) {
      w[k] = (2.0 * rng.uniform01() - 1.0) * bound;
    }
  }
  return net;
}

void softmax(std::span<const double> logits, std::span<double> out) {
  const double hi = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - hi);
    sum += out[i];
  }
  for (auto &p : out) {
    p /= sum;
  }
}

void forward(const Mlp &net, std::span<const double> input, Activations &acts) {
  if (input.size() != net.input_size()) {
    throw DimensionError("network expects " + std::to_string(net.input_size()) +
                         " inputs, got " + std::to_string(input.size()));
  }
  const auto layers = net.layer_count();
  acts.layers.resize(layers + 1);
  acts.layers[0].assign(input.begin(), input.end());
  const auto params = net.params();
  for (std::size_t l = 0; l < layers; ++l) {
    const auto in = net.dims()[l];
    const auto out = net.dims()[l + 1];
    const double *w = params.data() + net.weight_offset(l);
    const double *b = params.data() + net.bias_offset(l);
    const auto &x = acts.layers[l];
    auto &y = acts.layers[l + 1];
    y.resize(out);
    for (std::size_t o = 0; o < out; ++o) {
      const double *row = w + o * in;
      const double *xs = x.data();
      double z = 0.0;
#pragma omp simd reduction(+ : z)
      for (std::size_t i = 0; i < in; ++i) {
        z += row[i] * xs[i];
      }
      y[o] = b[o] + z;
    }
    if (l + 1 < layers) {
      for (auto &v : y) {
        v = std::tanh(v);
      }
    }
  }
  if (net.head() == Head::Softmax) {
    acts.probs.resize(net.output_size());
    softmax(acts.layers.back(), acts.probs);
  } else {
    acts.probs.clear();
  }
}

void backward(const Mlp &net, const Activations &acts, std::span<const double> output_grad,
              std::vector<double> &grad) {
  const auto layers = net.layer_count();
  grad.assign(net.params().size(), 0.0);
  const auto params = net.params();
  // delta holds dL/dz for the current layer's pre-activation.
  std::vector<double> delta(output_grad.begin(), output_grad.end());
  std::vector<double> below;
  for (std::size_t l = layers; l-- > 0;) {
    const auto in = net.dims()[l];
    const auto out = net.dims()[l + 1];
    const auto &x = acts.layers[l];
    double *gw = grad.data() + net.weight_offset(l);
    double *gb = grad.data() + net.bias_offset(l);
    for (std::size_t o = 0; o < out; ++o) {
      const double d = delta[o];
      gb[o] = d;
      double *row = gw + o * in;
      for (std::size_t i = 0; i < in; ++i) {
        row[i] = d * x[i];
      }
    }
    if (l == 0) {
      break;
    }
    const double *w = params.data() + net.weight_offset(l);
    below.assign(in, 0.0);
    for (std::size_t o = 0; o < out; ++o) {
      const double d = delta[o];
      const double *row = w + o * in;
      for (std::size_t i = 0; i < in; ++i) {
        below[i] += row[i] * d;
      }
    }
    // x = tanh(z)  =>  dx/dz = 1 - x^2
    for (std::size_t i = 0; i < in; ++i) {
      below[i] *= 1.0 - x[i] * x[i];
    }
    delta.swap(below);
  }
}

std::vector<double> policy_forward(const Mlp &net, std::span<const double> input) {
  if (net.head() != Head::Softmax) {
    throw DimensionError("policy_forward needs a softmax head");
  }
  Activations acts;
  forward(net, input, acts);
  return acts.probs;
}

double value_forward(const Mlp &net, std::span<const double> input) {
  if (net.head() != Head::Linear) {
    throw DimensionError("value_forward needs a linear head");
  }
  Activations acts;
  forward(net, input, acts);
  return acts.output()[0];
}

double log_prob(const Mlp &net, std::span<const double> input, std::size_t action) {
  Activations acts;
  forward(net, input, acts);
  const auto logits = acts.output();
  const double hi = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double z : logits) {
    sum += std::exp(z - hi);
  }
  return logits[action] - hi - std::log(sum);
}

std::vector<double> log_prob_gradient(const Mlp &net, std::span<const double> input,
                                      std::size_t action) {
  Activations acts;
  forward(net, input, acts);
  // d log softmax(z)_a / dz = e_a - p
  std::vector<double> dz(acts.probs.size());
  for (std::size_t k = 0; k < dz.size(); ++k) {
    dz[k] = (k == action ? 1.0 : 0.0) - acts.probs[k];
  }
  std::vector<double> grad;
  backward(net, acts, dz, grad);
  return grad;
}

std::vector<double> value_gradient(const Mlp &net, std::span<const double> input) {
  Activations acts;
  forward(net, input, acts);
  const double one = 1.0;
  std::vector<double> grad;
  backward(net, acts, std::span<const double>(&one, 1), grad);
  return grad;
}

double entropy(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) {
      h -= p * std::log(p);
    }
  }
  return h;
}

} // namespace kpdrl
