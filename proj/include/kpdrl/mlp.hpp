#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace kpdrl {

class Rng;

enum class Head { Softmax, Linear };

/// Fully connected network with tanh hidden layers.
///
/// All parameters live in one flat vector, layer by layer, each layer as a
/// row-major (out x in) weight matrix followed by its bias.
class Mlp {
public:
  Mlp() = default;
  /// Zero-initialized network. `dims` lists layer widths, input first.
  Mlp(std::vector<std::size_t> dims, Head head);

  /// Uniform(-a, a) weights with a = sqrt(6 / (in + out)) and zero biases;
  /// the output layer weights are additionally multiplied by `output_gain`.
  static Mlp xavier(std::vector<std::size_t> dims, Head head, Rng &rng, double output_gain);

  std::span<const std::size_t> dims() const noexcept { return dims_; }
  Head head() const noexcept { return head_; }
  std::size_t input_size() const noexcept { return dims_.front(); }
  std::size_t output_size() const noexcept { return dims_.back(); }
  std::size_t layer_count() const noexcept { return dims_.size() - 1; }

  std::span<double> params() noexcept { return params_; }
  std::span<const double> params() const noexcept { return params_; }

  std::size_t weight_offset(std::size_t layer) const noexcept { return offsets_[layer]; }
  std::size_t bias_offset(std::size_t layer) const noexcept {
    return offsets_[layer] + dims_[layer] * dims_[layer + 1];
  }

  friend bool operator==(const Mlp &, const Mlp &) = default;

private:
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> offsets_;
  Head head_ = Head::Linear;
  std::vector<double> params_;
};

/// Per-layer activations kept for backpropagation. layers[0] is the input,
/// layers[l] the tanh output of hidden layer l, and the last entry the raw
/// network output (logits or value).
struct Activations {
  std::vector<std::vector<double>> layers;
  /// Softmax of the logits; empty for a linear head.
  std::vector<double> probs;

  std::span<const double> output() const noexcept { return layers.back(); }
};

/// Throws DimensionError if `input` does not match the network.
void forward(const Mlp &net, std::span<const double> input, Activations &acts);

/// Given dL/d(output) for the raw output layer, writes dL/d(params) into
/// `grad` (resized and overwritten).
void backward(const Mlp &net, const Activations &acts, std::span<const double> output_grad,
              std::vector<double> &grad);

/// Numerically stable softmax (max subtracted before exponentiation).
void softmax(std::span<const double> logits, std::span<double> out);

/// Action distribution of a softmax-head network.
std::vector<double> policy_forward(const Mlp &net, std::span<const double> input);

/// Scalar output of a linear-head network with one output.
double value_forward(const Mlp &net, std::span<const double> input);

/// log pi(action | input) and its gradient with respect to the parameters.
double log_prob(const Mlp &net, std::span<const double> input, std::size_t action);
std::vector<double> log_prob_gradient(const Mlp &net, std::span<const double> input,
                                      std::size_t action);

/// Gradient of the value output with respect to the parameters.
std::vector<double> value_gradient(const Mlp &net, std::span<const double> input);

/// Entropy of a distribution (natural log).
double entropy(std::span<const double> probs);

} // namespace kpdrl
