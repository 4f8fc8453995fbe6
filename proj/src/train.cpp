// Copyright 2026 The fcfnn Authors
// SPDX-License-Identifier: Apache-2.0

#include "fcfnn/train.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fcfnn/error.hpp"
#include "fcfnn/kernels.hpp"
#include "hash.hpp"
#include "streams.hpp"

namespace fcfnn {

std::string_view to_string(OptimizerKind kind) {
  return kind == OptimizerKind::kSgd ? "sgd" : "adam";
}

std::optional<OptimizerKind> parse_optimizer(std::string_view name) {
  if (name == "sgd") return OptimizerKind::kSgd;
  if (name == "adam") return OptimizerKind::kAdam;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Config

void TrainingConfig::validate() const {
  if (!(vs > 0.0 && vs < 1.0)) {
    throw ConfigError("vs must be in (0, 1), got " + format_double(vs));
  }
  if (bs == 0) throw ConfigError("bs must be at least 1");
  if (epochs == 0) throw ConfigError("epochs must be at least 1");
  if (first_epoch == 0) throw ConfigError("epoch numbering starts at 1");
  // A zero learning rate is accepted: it is the null step.
  if (!(optimizer.learning_rate >= 0.0) || !std::isfinite(optimizer.learning_rate)) {
    throw ConfigError("learning rate must be finite and >= 0");
  }
  if (optimizer.kind == OptimizerKind::kAdam) {
    if (!(optimizer.beta1 >= 0.0 && optimizer.beta1 < 1.0) ||
        !(optimizer.beta2 >= 0.0 && optimizer.beta2 < 1.0)) {
      throw ConfigError("Adam betas must be in [0, 1)");
    }
    if (!(optimizer.epsilon > 0.0)) throw ConfigError("Adam epsilon must be positive");
  }
  if (activation_preset != kReluSoftmaxPreset) {
    throw ConfigError("unknown activation preset '" + activation_preset +
                      "' (supported: " + std::string(kReluSoftmaxPreset) + ")");
  }
}

std::string TrainingConfig::to_json_text() const {
  nlohmann::json doc = {
      {"vs", vs},
      {"bs", bs},
      {"epochs", epochs},
      {"optimizer",
       {{"kind", std::string(to_string(optimizer.kind))},
        {"learning_rate", optimizer.learning_rate},
        {"beta1", optimizer.beta1},
        {"beta2", optimizer.beta2},
        {"epsilon", optimizer.epsilon}}},
      {"activation_preset", activation_preset},
      {"seed", seed},
  };
  return doc.dump();
}

std::string TrainingConfig::fingerprint() const {
  return detail::fnv1a64_tag(to_json_text());
}

// ---------------------------------------------------------------------------
// Optimizers

void sgd_step(std::span<double> params, std::span<const double> grads, double lr) {
  if (params.size() != grads.size()) {
    throw DimensionError("sgd_step: " + std::to_string(params.size()) + " params vs " +
                         std::to_string(grads.size()) + " gradients");
  }
  // p + (-lr) * g is bitwise p - lr * g: negation is exact.
  kernels::active().axpy(-lr, grads.data(), params.data(), params.size());
}

void adam_step(std::span<double> params, std::span<const double> grads,
               AdamState& state, const OptimizerConfig& cfg) {
  if (params.size() != grads.size()) {
    throw DimensionError("adam_step: " + std::to_string(params.size()) + " params vs " +
                         std::to_string(grads.size()) + " gradients");
  }
  if (state.m.empty() && state.v.empty()) {
    state.m.assign(params.size(), 0.0);
    state.v.assign(params.size(), 0.0);
  }
  if (state.m.size() != params.size() || state.v.size() != params.size()) {
    throw DimensionError("adam_step: moment buffers do not match parameters");
  }
  state.t += 1;
  const double t = static_cast<double>(state.t);
  const kernels::AdamCoefficients c{
      cfg.learning_rate,
      cfg.beta1,
      cfg.beta2,
      1.0 - cfg.beta1,
      1.0 - cfg.beta2,
      1.0 - std::pow(cfg.beta1, t),
      1.0 - std::pow(cfg.beta2, t),
      cfg.epsilon,
  };
  kernels::active().adam(params.data(), grads.data(), state.m.data(), state.v.data(),
                         params.size(), c);
}

Optimizer::Optimizer(const OptimizerConfig& cfg, const Network& net)
    : cfg_(cfg),
      weight_states_(net.layers().size()),
      bias_states_(net.layers().size()) {}

void Optimizer::step(Network& net, const Gradients& grads) {
  auto& layers = net.mutable_layers();
  if (grads.layers.size() != layers.size()) {
    throw DimensionError("optimizer: gradient layer count does not match network");
  }
  for (std::size_t k = 0; k < layers.size(); ++k) {
    DenseLayer& layer = layers[k];
    const LayerGradient& g = grads.layers[k];
    if (cfg_.kind == OptimizerKind::kSgd) {
      sgd_step(layer.weights.span(), g.weights.span(), cfg_.learning_rate);
      if (net.use_bias()) sgd_step(layer.bias.span(), g.bias.span(), cfg_.learning_rate);
    } else {
      adam_step(layer.weights.span(), g.weights.span(), weight_states_[k], cfg_);
      if (net.use_bias()) adam_step(layer.bias.span(), g.bias.span(), bias_states_[k], cfg_);
    }
  }
}

// ---------------------------------------------------------------------------
// Training loop

namespace {

void check_compatible(const Network& net, const Dataset& ds) {
  if (net.input_width() != ds.schema.feature_count() ||
      net.output_width() != ds.schema.label_count()) {
    throw DimensionError("network " + std::to_string(net.input_width()) + "->" +
                         std::to_string(net.output_width()) + " does not match schema " +
                         std::to_string(ds.schema.feature_count()) + " features / " +
                         std::to_string(ds.schema.label_count()) + " labels");
  }
}

bool parameters_finite(const Network& net) {
  for (const DenseLayer& l : net.layers()) {
    if (!all_finite(l.weights.span()) || !all_finite(l.bias.span())) return false;
  }
  return true;
}

}  // namespace

TrainResult train(Network net, const Dataset& ds, const TrainingConfig& cfg,
                  const EpochCallback& on_epoch) {
  cfg.validate();
  check_compatible(net, ds);
  if (!net.has_softmax_head()) throw ConfigError("training requires a softmax output layer");
  for (std::size_t k = 0; k + 1 < net.layers().size(); ++k) {
    if (net.layer(k).activation != ActivationKind::kReLU) {
      throw ConfigError("activation preset relu-softmax requires ReLU hidden layers");
    }
  }

  const SplitDataset parts = split(ds, cfg.vs, cfg.seed);
  Optimizer optimizer(cfg.optimizer, net);
  Gradients grads = Gradients::zeros_like(net);
  const auto& kern = kernels::active();

  TrainResult result{std::move(net), {{}, cfg}};
  Network& model = result.network;
  for (std::size_t e = cfg.first_epoch; e < cfg.first_epoch + cfg.epochs; ++e) {
    const auto started = std::chrono::steady_clock::now();
    Rng dropout_rng(derive_seed(cfg.seed, streams::kDropout, e));
    const auto batches = batch_iter(parts.train.size(), cfg.bs, cfg.seed, e);
    for (std::size_t b = 0; b < batches.size(); ++b) {
      grads.set_zero();
      for (std::size_t row : batches[b]) {
        const Sample& s = parts.train.rows[row];
        ForwardTrace trace;
        try {
          trace = forward(model, s.features, Mode::kTrain, dropout_rng);
        } catch (const NumericError& ex) {
          throw NumericError("non-finite loss at epoch " + std::to_string(e) + ", batch " +
                             std::to_string(b + 1) + " (" + ex.what() + ")");
        }
        const double loss = cross_entropy(trace.output(), s.label);
        if (!std::isfinite(loss)) {
          throw NumericError("non-finite loss at epoch " + std::to_string(e) + ", batch " +
                             std::to_string(b + 1));
        }
        accumulate_gradients(model, trace, s.label, grads);
      }
      const double inv = 1.0 / static_cast<double>(batches[b].size());
      for (LayerGradient& g : grads.layers) {
        kern.scale(inv, g.weights.data(), g.weights.data(), g.weights.size());
        kern.scale(inv, g.bias.data(), g.bias.data(), g.bias.size());
      }
      optimizer.step(model, grads);
      if (!parameters_finite(model)) {
        throw NumericError("non-finite parameters after epoch " + std::to_string(e) +
                           ", batch " + std::to_string(b + 1));
      }
    }

    const Evaluation on_train = evaluate(model, parts.train);
    const Evaluation on_val = evaluate(model, parts.validation);
    if (!std::isfinite(on_train.loss) || !std::isfinite(on_val.loss)) {
      throw NumericError("non-finite evaluation loss at epoch " + std::to_string(e));
    }
    EpochMetrics m{e, on_train.accuracy, on_val.accuracy, on_train.loss, on_val.loss, 0.0};
    if (cfg.record_wall_time) {
      m.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - started)
                      .count();
    }
    result.history.epochs.push_back(m);
    if (on_epoch) on_epoch(m);
  }
  return result;
}

Evaluation evaluate(const Network& net, const Dataset& ds) {
  if (ds.empty()) throw DataError("cannot evaluate on an empty dataset");
  check_compatible(net, ds);
  std::size_t correct = 0;
  double total_loss = 0.0;
  for (const Sample& s : ds.rows) {
    const Vector p = infer(net, s.features);
    if (argmax(p.span()) == s.label) ++correct;
    total_loss += cross_entropy(p, s.label);
  }
  const double n = static_cast<double>(ds.size());
  return {static_cast<double>(correct) / n, total_loss / n};
}

DeadNeuronReport detect_dead_relu(const Network& net, const Dataset& probe) {
  if (probe.empty()) throw DataError("dead-neuron probe set is empty");
  if (net.input_width() != probe.schema.feature_count()) {
    throw DimensionError("probe features do not match the network input width");
  }
  const auto& layers = net.layers();
  std::vector<std::vector<bool>> alive(layers.size());
  for (std::size_t k = 0; k < layers.size(); ++k) alive[k].assign(layers[k].fan_out(), false);

  for (const Sample& s : probe.rows) {
    Vector h = s.features;
    for (std::size_t k = 0; k < layers.size(); ++k) {
      h = activate(layers[k].activation, weighted_sum(layers[k], h, net.use_bias()));
      if (layers[k].activation != ActivationKind::kReLU) continue;
      for (std::size_t i = 0; i < h.size(); ++i) {
        if (h[i] != 0.0) alive[k][i] = true;
      }
    }
  }

  DeadNeuronReport report;
  for (std::size_t k = 0; k < layers.size(); ++k) {
    if (layers[k].activation != ActivationKind::kReLU) continue;
    LayerDeadCount c{k, layers[k].fan_out(), 0};
    for (bool a : alive[k]) c.dead += a ? 0 : 1;
    report.total_dead += c.dead;
    report.total_neurons += c.width;
    report.layers.push_back(c);
  }
  return report;
}

// ---------------------------------------------------------------------------
// History files

void write_history_csv(std::ostream& out, std::span<const EpochMetrics> epochs,
                       bool header) {
  if (header) out << kHistoryHeader << '\n';
  for (const EpochMetrics& m : epochs) {
    out << m.epoch << ',' << format_double(m.train_accuracy) << ','
        << format_double(m.val_accuracy) << ',' << format_double(m.train_loss) << ','
        << format_double(m.val_loss) << ',' << format_double(m.wall_ms) << '\n';
  }
}

void export_history(const TrainingHistory& history, const std::filesystem::path& path,
                    bool append) {
  if (history.epochs.empty()) throw DataError("refusing to export an empty history");
  bool header = true;
  if (append) {
    std::error_code ec;
    header = !std::filesystem::exists(path, ec) || std::filesystem::file_size(path, ec) == 0;
  }
  std::ofstream out(path, std::ios::binary | (append ? std::ios::app : std::ios::trunc));
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_history_csv(out, history.epochs, header);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::vector<EpochMetrics> load_history(const std::filesystem::path& path) {
  const CsvTable t = read_csv_file(path);
  std::string header;
  for (std::size_t i = 0; i < t.header.size(); ++i) header += (i ? "," : "") + t.header[i];
  if (header != kHistoryHeader) {
    throw DataError(path.string() + ": not a training history (header '" + header + "')");
  }
  std::vector<EpochMetrics> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    double v[6];
    for (int c = 0; c < 6; ++c) {
      auto parsed = parse_double(t.rows[r][c]);
      if (!parsed) {
        throw DataError(path.string() + ":" + std::to_string(r + 2) + ": bad value '" +
                        t.rows[r][c] + "'");
      }
      v[c] = *parsed;
    }
    out.push_back({static_cast<std::size_t>(v[0]), v[1], v[2], v[3], v[4], v[5]});
  }
  return out;
}

std::string progress_line(const EpochMetrics& m) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "epoch=%zu train_acc=%.6f val_acc=%.6f train_loss=%.6f val_loss=%.6f",
                m.epoch, m.train_accuracy, m.val_accuracy, m.train_loss, m.val_loss);
  return buf;
}

}  // namespace fcfnn
