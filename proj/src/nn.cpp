// Copyright 2026 The fcfnn Authors
// SPDX-License-Identifier: Apache-2.0

#include "fcfnn/nn.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "fcfnn/error.hpp"
#include "fcfnn/kernels.hpp"

namespace fcfnn {

std::string_view to_string(ActivationKind kind) {
  switch (kind) {
    case ActivationKind::kReLU:
      return "relu";
    case ActivationKind::kSoftmax:
      return "softmax";
    case ActivationKind::kLinear:
      return "linear";
  }
  return "unknown";
}

std::optional<ActivationKind> parse_activation(std::string_view name) {
  if (name == "relu") return ActivationKind::kReLU;
  if (name == "softmax") return ActivationKind::kSoftmax;
  if (name == "linear") return ActivationKind::kLinear;
  return std::nullopt;
}

std::string_view to_string(InitScheme scheme) {
  return scheme == InitScheme::kHe ? "he" : "uniform";
}

std::optional<InitScheme> parse_init_scheme(std::string_view name) {
  if (name == "he") return InitScheme::kHe;
  if (name == "uniform") return InitScheme::kUniform;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Specs

void NetworkSpec::validate() const {
  if (input_width == 0) throw ConfigError("input width must be positive");
  if (layers.empty()) throw ConfigError("network needs at least one layer");
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const LayerSpec& l = layers[k];
    const std::string where = "layer " + std::to_string(k);
    if (l.width == 0) throw ConfigError(where + ": width must be positive");
    if (!(l.dropout_rate >= 0.0 && l.dropout_rate < 1.0)) {
      throw ConfigError(where + ": dropout rate must be in [0, 1), got " +
                        std::to_string(l.dropout_rate));
    }
    if (l.activation == ActivationKind::kSoftmax && k + 1 != layers.size()) {
      throw ConfigError(where + ": softmax is only allowed on the last layer");
    }
  }
  if (layers.back().dropout_rate != 0.0) {
    throw ConfigError("the output layer cannot use dropout");
  }
}

NetworkSpec NetworkSpec::paper_default() {
  return classifier(35,
                    {{128, ActivationKind::kReLU, 0.6},
                     {1256, ActivationKind::kReLU, 0.8},
                     {128, ActivationKind::kReLU, 0.6}},
                    29);
}

NetworkSpec NetworkSpec::classifier(std::size_t input_width,
                                    const std::vector<LayerSpec>& hidden,
                                    std::size_t output_width, bool use_bias) {
  NetworkSpec spec;
  spec.input_width = input_width;
  spec.use_bias = use_bias;
  spec.layers = hidden;
  spec.layers.push_back({output_width, ActivationKind::kSoftmax, 0.0});
  return spec;
}

NetworkSpec parse_architecture(std::string_view text, std::size_t input_width,
                               std::size_t output_width, bool use_bias) {
  if (text == "paper-default") {
    // Hidden stack of the preset; input and head follow the schema.
    NetworkSpec spec = NetworkSpec::paper_default();
    spec.input_width = input_width;
    spec.layers.back().width = output_width;
    spec.use_bias = use_bias;
    return spec;
  }
  std::vector<LayerSpec> hidden;
  auto bad = [&](std::string_view why) {
    return ConfigError("bad architecture '" + std::string(text) + "': " +
                       std::string(why));
  };
  std::size_t pos = 0;
  while (pos <= text.size() && !text.empty()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view item = text.substr(pos, comma - pos);
    LayerSpec layer;
    std::string_view width_part = item;
    std::string_view rate_part;
    if (auto colon = item.find(':'); colon != std::string_view::npos) {
      width_part = item.substr(0, colon);
      rate_part = item.substr(colon + 1);
    }
    auto [wp, wec] = std::from_chars(width_part.data(),
                                     width_part.data() + width_part.size(),
                                     layer.width);
    if (wec != std::errc() || wp != width_part.data() + width_part.size()) {
      throw bad("expected a layer width, got '" + std::string(width_part) + "'");
    }
    if (!rate_part.empty()) {
      auto [rp, rec] = std::from_chars(rate_part.data(),
                                       rate_part.data() + rate_part.size(),
                                       layer.dropout_rate);
      if (rec != std::errc() || rp != rate_part.data() + rate_part.size()) {
        throw bad("expected a dropout rate, got '" + std::string(rate_part) + "'");
      }
    }
    hidden.push_back(layer);
    pos = comma + 1;
    if (comma == text.size()) break;
  }
  if (hidden.empty()) throw bad("no layers");
  NetworkSpec spec =
      NetworkSpec::classifier(input_width, hidden, output_width, use_bias);
  spec.validate();
  return spec;
}

// ---------------------------------------------------------------------------
// Network

Network::Network(std::size_t input_width, std::vector<DenseLayer> layers,
                 bool use_bias, std::uint64_t seed)
    : input_width_(input_width),
      layers_(std::move(layers)),
      use_bias_(use_bias),
      seed_(seed) {
  validate();
}

std::size_t Network::output_width() const {
  return layers_.empty() ? 0 : layers_.back().fan_out();
}

NetworkSpec Network::spec() const {
  NetworkSpec s;
  s.input_width = input_width_;
  s.use_bias = use_bias_;
  for (const DenseLayer& l : layers_) {
    s.layers.push_back({l.fan_out(), l.activation, l.dropout_rate});
  }
  return s;
}

std::size_t Network::parameter_count() const {
  std::size_t n = 0;
  for (const DenseLayer& l : layers_) {
    n += l.weights.size();
    if (use_bias_) n += l.bias.size();
  }
  return n;
}

bool Network::has_softmax_head() const {
  return !layers_.empty() &&
         layers_.back().activation == ActivationKind::kSoftmax;
}

void Network::validate() const {
  spec().validate();
  std::size_t width = input_width_;
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    const DenseLayer& l = layers_[k];
    if (l.weights.cols() != width) {
      throw DimensionError("layer " + std::to_string(k) + ": weights " +
                           shape_string(l.weights) + " expect input width " +
                           std::to_string(l.weights.cols()) + ", previous width is " +
                           std::to_string(width));
    }
    if (l.bias.size() != l.weights.rows()) {
      throw DimensionError("layer " + std::to_string(k) + ": bias " +
                           shape_string(l.bias) + " does not match weights " +
                           shape_string(l.weights));
    }
    if (!use_bias_ &&
        std::any_of(l.bias.begin(), l.bias.end(), [](double b) { return b != 0.0; })) {
      throw ConfigError("layer " + std::to_string(k) +
                        ": nonzero bias in a network built without bias");
    }
    width = l.fan_out();
  }
}

// ---------------------------------------------------------------------------
// Gradients

Gradients Gradients::zeros_like(const Network& net) {
  Gradients g;
  g.layers.reserve(net.layers().size());
  for (const DenseLayer& l : net.layers()) {
    g.layers.push_back({Matrix(l.fan_out(), l.fan_in()), Vector(l.fan_out())});
  }
  return g;
}

void Gradients::set_zero() {
  for (LayerGradient& l : layers) {
    std::fill(l.weights.span().begin(), l.weights.span().end(), 0.0);
    std::fill(l.bias.begin(), l.bias.end(), 0.0);
  }
}

// ---------------------------------------------------------------------------
// Layer math

Vector weighted_sum(const DenseLayer& layer, const Vector& input,
                    bool use_bias) {
  Vector s = matvec(layer.weights, input);
  if (use_bias) {
    kernels::active().add(s.data(), layer.bias.data(), s.data(), s.size());
  }
  return s;
}

Vector relu(const Vector& s) {
  Vector out(s.size());
  kernels::active().relu(s.data(), out.data(), s.size());
  return out;
}

Vector relu_grad(const Vector& s) {
  Vector out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i] > 0.0 ? 1.0 : 0.0;
  return out;
}

Vector softmax(const Vector& z) {
  if (z.empty()) throw DimensionError("softmax of an empty vector");
  if (!all_finite(z.span())) throw NumericError("softmax: non-finite logit");
  const double shift = *std::max_element(z.begin(), z.end());
  Vector out(z.size());
  double total = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    out[i] = std::exp(z[i] - shift);
    total += out[i];
  }
  for (double& v : out) v /= total;
  return out;
}

Vector activate(ActivationKind kind, const Vector& s) {
  switch (kind) {
    case ActivationKind::kReLU:
      return relu(s);
    case ActivationKind::kSoftmax:
      return softmax(s);
    case ActivationKind::kLinear:
      return s;
  }
  return s;
}

DropoutResult apply_dropout(const Vector& y, double rate, Mode mode, Rng& rng) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw ConfigError("dropout rate must be in [0, 1), got " +
                      std::to_string(rate));
  }
  if (mode == Mode::kInfer || rate == 0.0) return {y, Vector(y.size(), 1.0)};
  const double keep = 1.0 - rate;
  const double factor = 1.0 / keep;
  DropoutResult r{Vector(y.size()), Vector(y.size())};
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (rng.uniform() < rate) continue;  // dropped: output and mask stay 0
    r.output[i] = y[i] / keep;
    r.mask[i] = factor;
  }
  return r;
}

namespace {

void check_input(const Network& net, const Vector& x) {
  if (x.size() != net.input_width()) {
    throw DimensionError("network expects " + std::to_string(net.input_width()) +
                         " inputs, got " + shape_string(x));
  }
  if (!all_finite(x.span())) throw NumericError("non-finite network input");
}

}  // namespace

ForwardTrace forward(const Network& net, const Vector& x, Mode mode, Rng& rng) {
  check_input(net, x);
  ForwardTrace trace;
  trace.input = x;
  const std::size_t n = net.layers().size();
  trace.pre_activations.reserve(n);
  trace.activations.reserve(n);
  trace.dropout_masks.reserve(n);
  const Vector* h = &trace.input;
  for (const DenseLayer& layer : net.layers()) {
    trace.pre_activations.push_back(weighted_sum(layer, *h, net.use_bias()));
    Vector y = activate(layer.activation, trace.pre_activations.back());
    DropoutResult d = apply_dropout(y, layer.dropout_rate, mode, rng);
    trace.activations.push_back(std::move(d.output));
    trace.dropout_masks.push_back(std::move(d.mask));
    h = &trace.activations.back();
  }
  return trace;
}

Vector infer(const Network& net, const Vector& x) {
  check_input(net, x);
  Vector h = x;
  for (const DenseLayer& layer : net.layers()) {
    h = activate(layer.activation, weighted_sum(layer, h, net.use_bias()));
  }
  return h;
}

// ---------------------------------------------------------------------------
// Loss and gradients

Vector one_hot(std::size_t label, std::size_t width) {
  if (label >= width) {
    throw DimensionError("label " + std::to_string(label) +
                         " out of range for width " + std::to_string(width));
  }
  Vector v(width);
  v[label] = 1.0;
  return v;
}

std::size_t argmax(std::span<const double> values) {
  return static_cast<std::size_t>(
      std::max_element(values.begin(), values.end()) - values.begin());
}

namespace {

std::size_t one_hot_index(const Vector& target) {
  std::optional<std::size_t> hot;
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (target[i] == 1.0 && !hot) {
      hot = i;
    } else if (target[i] != 0.0) {
      throw DataError("target is not one-hot");
    }
  }
  if (!hot) throw DataError("target is not one-hot");
  return *hot;
}

}  // namespace

double cross_entropy(const Vector& pred, std::size_t label) {
  if (label >= pred.size()) {
    throw DimensionError("label " + std::to_string(label) +
                         " out of range for prediction " + shape_string(pred));
  }
  return -std::log(std::max(pred[label], 1e-12));
}

double cross_entropy(const Vector& pred, const Vector& target) {
  if (pred.size() != target.size()) {
    throw DimensionError("cross_entropy: prediction " + shape_string(pred) +
                         " vs target " + shape_string(target));
  }
  double total = 0.0;
  for (double p : pred) total += p;
  if (std::abs(total - 1.0) > 1e-6) {
    throw NumericError("cross_entropy: prediction sums to " +
                       std::to_string(total) + ", not 1");
  }
  return cross_entropy(pred, one_hot_index(target));
}

void accumulate_gradients(const Network& net, const ForwardTrace& trace,
                          std::size_t label, Gradients& into) {
  const auto& layers = net.layers();
  const std::size_t n = layers.size();
  if (!net.has_softmax_head()) {
    throw ConfigError("backpropagation requires a softmax output layer");
  }
  if (trace.pre_activations.size() != n || trace.activations.size() != n ||
      trace.dropout_masks.size() != n || into.layers.size() != n) {
    throw DimensionError("forward trace has " +
                         std::to_string(trace.activations.size()) +
                         " layers, network has " + std::to_string(n));
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (trace.pre_activations[k].size() != layers[k].fan_out() ||
        into.layers[k].weights.rows() != layers[k].fan_out() ||
        into.layers[k].weights.cols() != layers[k].fan_in()) {
      throw DimensionError("forward trace / gradient shape mismatch at layer " +
                           std::to_string(k));
    }
  }
  if (trace.input.size() != net.input_width()) {
    throw DimensionError("forward trace input does not match the network");
  }
  if (label >= net.output_width()) {
    throw DimensionError("label " + std::to_string(label) +
                         " out of range for " + std::to_string(net.output_width()) +
                         " outputs");
  }

  const auto& kern = kernels::active();
  // Fused softmax + cross-entropy: dL/dS = pred - target.
  Vector delta = trace.output();
  delta[label] -= 1.0;

  for (std::size_t k = n; k-- > 0;) {
    const DenseLayer& layer = layers[k];
    const Vector& input = k == 0 ? trace.input : trace.activations[k - 1];
    LayerGradient& g = into.layers[k];
    const std::size_t fan_in = layer.fan_in();
    for (std::size_t i = 0; i < delta.size(); ++i) {
      if (delta[i] == 0.0) continue;
      kern.axpy(delta[i], input.data(), g.weights.data() + i * fan_in, fan_in);
    }
    if (net.use_bias()) kern.add(g.bias.data(), delta.data(), g.bias.data(), delta.size());
    if (k == 0) break;

    // Back through layer k-1: dropout mask, then its activation derivative.
    Vector upstream = matvec_transposed(layer.weights, delta);
    const Vector& mask = trace.dropout_masks[k - 1];
    const Vector& pre = trace.pre_activations[k - 1];
    kern.mul(upstream.data(), mask.data(), upstream.data(), upstream.size());
    switch (layers[k - 1].activation) {
      case ActivationKind::kReLU:
        for (std::size_t i = 0; i < upstream.size(); ++i) {
          if (!(pre[i] > 0.0)) upstream[i] = 0.0;
        }
        break;
      case ActivationKind::kLinear:
        break;
      case ActivationKind::kSoftmax:
        throw ConfigError("softmax is only allowed on the last layer");
    }
    delta = std::move(upstream);
  }
}

Gradients backward(const Network& net, const ForwardTrace& trace,
                   const Vector& target) {
  if (target.size() != net.output_width()) {
    throw DimensionError("target " + shape_string(target) + " vs " +
                         std::to_string(net.output_width()) + " network outputs");
  }
  Gradients g = Gradients::zeros_like(net);
  accumulate_gradients(net, trace, one_hot_index(target), g);
  return g;
}

Network init_weights(const NetworkSpec& spec, InitScheme scheme,
                     std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  std::vector<DenseLayer> layers;
  std::size_t fan_in = spec.input_width;
  for (const LayerSpec& ls : spec.layers) {
    DenseLayer layer{Matrix(ls.width, fan_in), Vector(ls.width), ls.activation,
                     ls.dropout_rate};
    const double n = static_cast<double>(fan_in);
    if (scheme == InitScheme::kHe) {
      const double sd = std::sqrt(
          (ls.activation == ActivationKind::kReLU ? 2.0 : 1.0) / n);
      for (double& w : layer.weights.span()) w = rng.normal(0.0, sd);
    } else {
      const double bound = 1.0 / std::sqrt(n);
      for (double& w : layer.weights.span()) w = rng.uniform(-bound, bound);
    }
    layers.push_back(std::move(layer));
    fan_in = ls.width;
  }
  return Network(spec.input_width, std::move(layers), spec.use_bias, seed);
}

}  // namespace fcfnn
