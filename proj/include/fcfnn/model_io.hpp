// Copyright 2026 The fcfnn Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FCFNN_MODEL_IO_HPP_
#define FCFNN_MODEL_IO_HPP_

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "fcfnn/linalg.hpp"
#include "fcfnn/nn.hpp"
#include "fcfnn/schema.hpp"

namespace fcfnn {

inline constexpr int kModelFormatVersion = 1;
inline constexpr std::string_view kModelFormatName = "fcfnn-model";

struct ModelMetadata {
  std::string creator = "fcfnn";
  std::size_t epochs_trained = 0;
  /// TrainingConfig::to_json_text() of the run that produced the weights,
  /// empty for untrained models.
  std::string training_config;
  std::string training_fingerprint;

  bool operator==(const ModelMetadata&) const = default;
};

struct Model {
  Network network;
  SchemaSpec schema;
  ModelMetadata metadata;
};

/// JSON document with shortest round-trip decimals and a trailing
/// "checksum" (FNV-1a 64 over the document serialized without it).
std::string model_to_json_text(const Model& model);

/// Rejects unsupported format versions before anything else, then checksum
/// mismatches, then shape inconsistencies. Throws ModelError.
Model model_from_json_text(std::string_view text);

void save_model(const Model& model, const std::filesystem::path& path);
void save_model(const Network& net, const SchemaSpec& schema,
                const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

/// Inference-mode probabilities. Features outside [0, 1] produce a warning.
Vector predict(const Network& net, const Vector& features);

struct RankedEntry {
  std::string code;
  std::size_t label_index = 0;
  double probability = 0.0;
};

struct RankedProfile {
  std::string respondent;
  std::vector<RankedEntry> entries;  // descending; ties keep schema order
};

RankedProfile rank(const Vector& probabilities, const SchemaSpec& schema,
                   std::string respondent = {});

/// "EA 94.6%, EU 3.5%, EM 0.9%". Entries with probability >= threshold use
/// one decimal place; smaller ones use scientific notation ("SC 3.3e-06%").
/// At most max_entries are listed (0 = all) and the first always is.
std::string format_report(const RankedProfile& profile, double threshold = 1e-3,
                          std::size_t max_entries = 3);

inline constexpr std::size_t kDefaultTopK = 3;

/// Reads a CSV with the model's feature columns, appends
/// rank1_code,rank1_prob,...,rankK_code,rankK_prob and writes it to out_path.
/// Input columns and row order are kept verbatim. Returns the profiles, one
/// per row, for reporting.
std::vector<RankedProfile> classify_csv(const Model& model,
                                        const std::filesystem::path& in_path,
                                        const std::filesystem::path& out_path,
                                        std::size_t top_k = kDefaultTopK);

}  // namespace fcfnn

#endif  // FCFNN_MODEL_IO_HPP_
