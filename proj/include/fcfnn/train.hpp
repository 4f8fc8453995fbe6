// Copyright 2026 The fcfnn Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FCFNN_TRAIN_HPP_
#define FCFNN_TRAIN_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fcfnn/data.hpp"
#include "fcfnn/nn.hpp"

namespace fcfnn {

enum class OptimizerKind { kSgd, kAdam };

std::string_view to_string(OptimizerKind kind);
std::optional<OptimizerKind> parse_optimizer(std::string_view name);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::kAdam;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// The only activation preset: ReLU hidden layers with a softmax head.
inline constexpr std::string_view kReluSoftmaxPreset = "relu-softmax";

struct TrainingConfig {
  double vs = 0.1;          // validation split
  std::size_t bs = 20;      // batch size
  std::size_t epochs = 1000;
  OptimizerConfig optimizer;
  std::string activation_preset{kReluSoftmaxPreset};
  std::uint64_t seed = 42;
  /// Index of the first epoch of this run; later runs on the same network
  /// continue the numbering (and the per-epoch shuffles).
  std::size_t first_epoch = 1;
  /// When false, wall_ms is recorded as 0 so histories compare bitwise.
  bool record_wall_time = true;

  void validate() const;

  /// Canonical JSON of the knobs that shape training (not first_epoch or
  /// record_wall_time).
  std::string to_json_text() const;
  /// "fnv1a64:<hex>" over to_json_text().
  std::string fingerprint() const;
};

struct EpochMetrics {
  std::size_t epoch = 0;
  double train_accuracy = 0.0;
  double val_accuracy = 0.0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  double wall_ms = 0.0;

  bool operator==(const EpochMetrics&) const = default;
};

struct TrainingHistory {
  std::vector<EpochMetrics> epochs;
  TrainingConfig config;
};

struct TrainResult {
  Network network;
  TrainingHistory history;
};

using EpochCallback = std::function<void(const EpochMetrics&)>;

/// p' = p - lr * g
void sgd_step(std::span<double> params, std::span<const double> grads, double lr);

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t t = 0;
};

/// Bias-corrected Adam. Zero-sized moments are initialized to zeros; t
/// advances by one.
void adam_step(std::span<double> params, std::span<const double> grads,
               AdamState& state, const OptimizerConfig& cfg);

/// Applies one optimizer step to every layer of a network.
class Optimizer {
 public:
  Optimizer(const OptimizerConfig& cfg, const Network& net);
  void step(Network& net, const Gradients& grads);

 private:
  OptimizerConfig cfg_;
  std::vector<AdamState> weight_states_;
  std::vector<AdamState> bias_states_;
};

/// Mini-batch training. Each epoch reshuffles the training split, takes one
/// optimizer step per batch on the batch-averaged gradient, then evaluates on
/// the training and validation splits in inference mode.
///
/// Throws DimensionError if the network does not match the dataset schema
/// and NumericError, naming the epoch and batch, if a loss turns non-finite.
TrainResult train(Network net, const Dataset& ds, const TrainingConfig& cfg,
                  const EpochCallback& on_epoch = {});

struct Evaluation {
  double accuracy = 0.0;  // fraction of rows where argmax == label
  double loss = 0.0;      // mean cross-entropy
};

/// Inference-mode metrics. Throws DataError on an empty dataset.
Evaluation evaluate(const Network& net, const Dataset& ds);

struct LayerDeadCount {
  std::size_t layer = 0;
  std::size_t width = 0;
  std::size_t dead = 0;
};

struct DeadNeuronReport {
  std::vector<LayerDeadCount> layers;  // ReLU layers only
  std::size_t total_dead = 0;
  std::size_t total_neurons = 0;

  double fraction() const {
    return total_neurons == 0 ? 0.0
                              : static_cast<double>(total_dead) /
                                    static_cast<double>(total_neurons);
  }
};

/// A ReLU neuron is dead when its inference-mode output is 0 on every probe
/// row.
DeadNeuronReport detect_dead_relu(const Network& net, const Dataset& probe);

/// Columns: epoch,train_acc,val_acc,train_loss,val_loss,wall_ms
inline constexpr std::string_view kHistoryHeader =
    "epoch,train_acc,val_acc,train_loss,val_loss,wall_ms";

void write_history_csv(std::ostream& out, std::span<const EpochMetrics> epochs,
                       bool header = true);
/// Writes the history CSV. With `append`, rows go after an existing file's
/// rows and the header is written only if the file is new or empty.
void export_history(const TrainingHistory& history,
                    const std::filesystem::path& path, bool append = false);
std::vector<EpochMetrics> load_history(const std::filesystem::path& path);

/// `epoch=<n> train_acc=<f> val_acc=<f> train_loss=<f> val_loss=<f>`
std::string progress_line(const EpochMetrics& m);

}  // namespace fcfnn

#endif  // FCFNN_TRAIN_HPP_
