// Copyright 2026 The fcfnn Authors
// SPDX-License-Identifier: Apache-2.0

// Central finite differences against an independent forward pass.

#ifndef FCFNN_TESTS_GRADIENT_CHECK_HPP_
#define FCFNN_TESTS_GRADIENT_CHECK_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "fcfnn/nn.hpp"

namespace fcfnn::testing {

struct OracleLayerState {
  std::vector<double> pre;
  std::vector<double> post;
};

// Plain loops with no shared code path: S = W x + b, then ReLU / identity /
// max-shifted softmax. Returns the per-layer states.
inline std::vector<OracleLayerState> oracle_forward(const Network& net,
                                                    const std::vector<double>& x) {
  std::vector<OracleLayerState> states;
  std::vector<double> h = x;
  for (const DenseLayer& l : net.layers()) {
    OracleLayerState st;
    st.pre.assign(l.fan_out(), 0.0);
    for (std::size_t i = 0; i < l.fan_out(); ++i) {
      double s = net.use_bias() ? l.bias[i] : 0.0;
      for (std::size_t j = 0; j < l.fan_in(); ++j) s += l.weights(i, j) * h[j];
      st.pre[i] = s;
    }
    st.post = st.pre;
    if (l.activation == ActivationKind::kReLU) {
      for (double& v : st.post) v = v > 0.0 ? v : 0.0;
    } else if (l.activation == ActivationKind::kSoftmax) {
      const double m = *std::max_element(st.post.begin(), st.post.end());
      double total = 0.0;
      for (double& v : st.post) total += (v = std::exp(v - m));
      for (double& v : st.post) v /= total;
    }
    h = st.post;
    states.push_back(std::move(st));
  }
  return states;
}

inline double oracle_loss(const Network& net, const std::vector<double>& x,
                          std::size_t label) {
  return -std::log(oracle_forward(net, x).back().post[label]);
}

struct GradientCheckResult {
  std::size_t checked = 0;   // coordinates compared
  std::size_t passed = 0;    // within tolerance
  std::size_t excluded = 0;  // at the ReLU kink
  double worst_relative = 0.0;

  double pass_fraction() const {
    return checked == 0 ? 1.0 : static_cast<double>(passed) / static_cast<double>(checked);
  }
};

// Relative error |a - n| / max(|a|, |n|, floor). The floor keeps coordinates
// whose true gradient is zero from being judged on rounding noise alone.
inline double relative_error(double analytic, double numeric, double floor = 1e-6) {
  return std::abs(analytic - numeric) /
         std::max({std::abs(analytic), std::abs(numeric), floor});
}

// Compares every weight and bias gradient with central differences of step h.
// A coordinate of layer k is excluded when the pre-activation of its unit
// lies within kink of zero.
inline GradientCheckResult check_gradients(Network net, const Vector& x, std::size_t label,
                                           double h = 1e-5, double tolerance = 1e-4,
                                           double kink = 1e-6) {
  Rng unused(0);
  const ForwardTrace trace = forward(net, x, Mode::kInfer, unused);
  const Gradients analytic = backward(net, trace, one_hot(label, net.output_width()));
  const std::vector<double> xs(x.begin(), x.end());
  const auto states = oracle_forward(net, xs);

  GradientCheckResult r;
  auto probe = [&](double& param, double grad, bool at_kink) {
    if (at_kink) {
      ++r.excluded;
      return;
    }
    const double saved = param;
    param = saved + h;
    const double up = oracle_loss(net, xs, label);
    param = saved - h;
    const double down = oracle_loss(net, xs, label);
    param = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double rel = relative_error(grad, numeric);
    ++r.checked;
    if (rel <= tolerance) ++r.passed;
    r.worst_relative = std::max(r.worst_relative, rel);
  };

  auto& layers = net.mutable_layers();
  for (std::size_t k = 0; k < layers.size(); ++k) {
    DenseLayer& l = layers[k];
    // Parameters feeding a ReLU unit that sits at its kink are excluded.
    for (std::size_t i = 0; i < l.fan_out(); ++i) {
      const bool at_kink = l.activation == ActivationKind::kReLU &&
                           std::abs(states[k].pre[i]) < kink;
      for (std::size_t j = 0; j < l.fan_in(); ++j) {
        probe(l.weights(i, j), analytic.layers[k].weights(i, j), at_kink);
      }
      if (net.use_bias()) probe(l.bias[i], analytic.layers[k].bias[i], at_kink);
    }
  }
  return r;
}

// Random ReLU/softmax classifier no larger than 10 -> 8 -> 6 -> 4.
inline Network random_small_network(std::mt19937_64& g, std::size_t max_in = 10,
                                    std::size_t max_out = 4) {
  std::uniform_int_distribution<std::size_t> in_d(2, max_in);
  std::uniform_int_distribution<std::size_t> out_d(2, max_out);
  std::uniform_int_distribution<int> depth_d(0, 2);
  const std::size_t in = in_d(g);
  std::vector<LayerSpec> hidden;
  const std::size_t widths[] = {8, 6};
  const int depth = depth_d(g);
  for (int d = 0; d < depth; ++d) {
    std::uniform_int_distribution<std::size_t> w(2, widths[d]);
    hidden.push_back({w(g), ActivationKind::kReLU, 0.0});
  }
  Network net = init_weights(NetworkSpec::classifier(in, hidden, out_d(g)), InitScheme::kHe,
                             g());
  std::normal_distribution<double> b(0.0, 0.1);
  for (DenseLayer& l : net.mutable_layers())
    for (double& v : l.bias) v = b(g);
  return net;
}

}  // namespace fcfnn::testing

#endif  // FCFNN_TESTS_GRADIENT_CHECK_HPP_
