// Copyright 2026 The fcfnn Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FCFNN_NN_HPP_
#define FCFNN_NN_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fcfnn/linalg.hpp"
#include "fcfnn/rng.hpp"

namespace fcfnn {

enum class ActivationKind { kReLU, kSoftmax, kLinear };
enum class Mode { kTrain, kInfer };
enum class InitScheme { kHe, kUniform };

std::string_view to_string(ActivationKind kind);
std::optional<ActivationKind> parse_activation(std::string_view name);
std::string_view to_string(InitScheme scheme);
std::optional<InitScheme> parse_init_scheme(std::string_view name);

/// One fully connected layer: activation(weights * input + bias), followed by
/// dropout on the layer output while training.
struct DenseLayer {
  Matrix weights;  // fan_out x fan_in
  Vector bias;     // fan_out
  ActivationKind activation = ActivationKind::kReLU;
  double dropout_rate = 0.0;  // in [0, 1)

  std::size_t fan_in() const { return weights.cols(); }
  std::size_t fan_out() const { return weights.rows(); }

  bool operator==(const DenseLayer&) const = default;
};

struct LayerSpec {
  std::size_t width = 0;
  ActivationKind activation = ActivationKind::kReLU;
  double dropout_rate = 0.0;

  bool operator==(const LayerSpec&) const = default;
};

/// Shape-only description of a network.
struct NetworkSpec {
  std::size_t input_width = 0;
  std::vector<LayerSpec> layers;
  bool use_bias = true;

  /// Throws ConfigError on zero widths, bad dropout rates, or a softmax
  /// layer anywhere but last.
  void validate() const;

  /// 35 -> Dense(128, ReLU) -> Dropout(0.6) -> Dense(1256, ReLU) ->
  /// Dropout(0.8) -> Dense(128, ReLU) -> Dropout(0.6) -> Dense(29, Softmax)
  static NetworkSpec paper_default();

  /// Hidden ReLU layers of the given widths/dropouts, then a softmax head.
  static NetworkSpec classifier(std::size_t input_width,
                                const std::vector<LayerSpec>& hidden,
                                std::size_t output_width, bool use_bias = true);

  bool operator==(const NetworkSpec&) const = default;
};

/// Parses an architecture string: "paper-default", or comma-separated hidden
/// layers "WIDTH[:DROPOUT]" such as "128:0.6,1256:0.8,128:0.6". Hidden layers
/// use ReLU; a softmax head of `output_width` is appended.
NetworkSpec parse_architecture(std::string_view text, std::size_t input_width,
                               std::size_t output_width, bool use_bias = true);

class Network {
 public:
  Network() = default;
  Network(std::size_t input_width, std::vector<DenseLayer> layers,
          bool use_bias = true, std::uint64_t seed = 0);

  std::size_t input_width() const { return input_width_; }
  std::size_t output_width() const;
  const std::vector<DenseLayer>& layers() const { return layers_; }
  std::vector<DenseLayer>& mutable_layers() { return layers_; }
  const DenseLayer& layer(std::size_t k) const { return layers_.at(k); }
  bool use_bias() const { return use_bias_; }
  std::uint64_t seed() const { return seed_; }

  NetworkSpec spec() const;
  std::size_t parameter_count() const;

  /// True when the last layer is softmax, as training requires.
  bool has_softmax_head() const;

  /// Re-checks shape chaining and layer constraints; throws on violation.
  void validate() const;

  bool operator==(const Network&) const = default;

 private:
  std::size_t input_width_ = 0;
  std::vector<DenseLayer> layers_;
  bool use_bias_ = true;
  std::uint64_t seed_ = 0;
};

/// Intermediate values of one forward pass, indexed by layer.
struct ForwardTrace {
  Vector input;
  std::vector<Vector> pre_activations;  // weights * input + bias
  std::vector<Vector> activations;      // after activation and dropout
  std::vector<Vector> dropout_masks;    // 0 or 1/(1-rate) per unit; ones if inactive

  const Vector& output() const { return activations.back(); }
};

struct LayerGradient {
  Matrix weights;
  Vector bias;
};

struct Gradients {
  std::vector<LayerGradient> layers;

  static Gradients zeros_like(const Network& net);
  void set_zero();
};

Vector weighted_sum(const DenseLayer& layer, const Vector& input,
                    bool use_bias = true);
Vector relu(const Vector& s);
/// 1 where s > 0, else 0 (including at exactly 0).
Vector relu_grad(const Vector& s);
/// Max-shifted softmax. Throws NumericError on non-finite input.
Vector softmax(const Vector& z);
Vector activate(ActivationKind kind, const Vector& s);

struct DropoutResult {
  Vector output;
  Vector mask;
};

/// Inverted dropout: in Train mode each unit is dropped with probability
/// `rate` and survivors are divided by (1 - rate). Infer mode and rate 0 are
/// identities that draw nothing from `rng`.
DropoutResult apply_dropout(const Vector& y, double rate, Mode mode, Rng& rng);

ForwardTrace forward(const Network& net, const Vector& x, Mode mode, Rng& rng);

/// Infer-mode forward returning only the output.
Vector infer(const Network& net, const Vector& x);

/// -ln(pred[c]) for the one-hot class c, with pred floored at 1e-12.
double cross_entropy(const Vector& pred, const Vector& target);
double cross_entropy(const Vector& pred, std::size_t label);

Vector one_hot(std::size_t label, std::size_t width);
std::size_t argmax(std::span<const double> values);

/// Gradients of the cross-entropy loss for one sample. The output delta is
/// pred - target; dropout masks from the trace gate hidden deltas.
Gradients backward(const Network& net, const ForwardTrace& trace,
                   const Vector& target);

/// Adds one sample's gradients into `into` (shaped like `net`).
void accumulate_gradients(const Network& net, const ForwardTrace& trace,
                          std::size_t label, Gradients& into);

/// Fresh network for `spec`. He: N(0, 2/fan_in) for ReLU layers and
/// N(0, 1/fan_in) otherwise. Uniform: U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
/// Biases start at zero.
Network init_weights(const NetworkSpec& spec, InitScheme scheme,
                     std::uint64_t seed);

}  // namespace fcfnn

#endif  // FCFNN_NN_HPP_
