// Copyright 2026 The fcfnn Authors
// SPDX-License-Identifier: Apache-2.0

#include "fcfnn/model_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fcfnn/csv.hpp"
#include "fcfnn/data.hpp"
#include "fcfnn/error.hpp"
#include "fcfnn/log.hpp"
#include "hash.hpp"
#include "schema_json.hpp"

namespace fcfnn {

using nlohmann::json;

namespace {

json network_to_json(const Network& net, json& parameters) {
  json layers = json::array();
  parameters = json::array();
  for (const DenseLayer& l : net.layers()) {
    layers.push_back({{"width", l.fan_out()},
                      {"activation", std::string(to_string(l.activation))},
                      {"dropout_rate", l.dropout_rate}});
    parameters.push_back({{"weights", l.weights.values()}, {"bias", l.bias.values()}});
  }
  return {{"input_width", net.input_width()},
          {"use_bias", net.use_bias()},
          {"seed", net.seed()},
          {"layers", std::move(layers)}};
}

std::vector<double> number_array(const json& node, const std::string& what) {
  if (!node.is_array()) throw ModelError(what + " is not an array");
  std::vector<double> out;
  out.reserve(node.size());
  for (const json& v : node) {
    if (!v.is_number()) throw ModelError(what + " holds a non-numeric entry");
    out.push_back(v.get<double>());
  }
  return out;
}

Network network_from_json(const json& arch, const json& parameters) {
  const auto input_width = arch.at("input_width").get<std::size_t>();
  const bool use_bias = arch.at("use_bias").get<bool>();
  const auto seed = arch.at("seed").get<std::uint64_t>();
  const json& specs = arch.at("layers");
  if (!specs.is_array() || !parameters.is_array() || specs.size() != parameters.size()) {
    throw ModelError("architecture lists " + std::to_string(specs.size()) +
                     " layers but parameters hold " + std::to_string(parameters.size()));
  }
  std::vector<DenseLayer> layers;
  std::size_t fan_in = input_width;
  for (std::size_t k = 0; k < specs.size(); ++k) {
    const std::string where = "layer " + std::to_string(k);
    const auto width = specs[k].at("width").get<std::size_t>();
    const auto act_name = specs[k].at("activation").get<std::string>();
    const auto act = parse_activation(act_name);
    if (!act) throw ModelError(where + ": unknown activation '" + act_name + "'");
    std::vector<double> w = number_array(parameters[k].at("weights"), where + " weights");
    std::vector<double> b = number_array(parameters[k].at("bias"), where + " bias");
    if (width == 0 || fan_in == 0 || w.size() != width * fan_in) {
      throw ModelError(where + ": declared shape " + std::to_string(width) + "x" +
                       std::to_string(fan_in) + " but " + std::to_string(w.size()) +
                       " weights stored");
    }
    if (b.size() != width) {
      throw ModelError(where + ": declared width " + std::to_string(width) + " but " +
                       std::to_string(b.size()) + " biases stored");
    }
    DenseLayer layer;
    layer.weights = Matrix(width, fan_in, std::move(w));
    layer.bias = Vector(std::move(b));
    layer.activation = *act;
    layer.dropout_rate = specs[k].at("dropout_rate").get<double>();
    layers.push_back(std::move(layer));
    fan_in = width;
  }
  return Network(input_width, std::move(layers), use_bias, seed);
}

std::string checksum_of(const json& doc_without_checksum) {
  return detail::fnv1a64_tag(doc_without_checksum.dump());
}

}  // namespace

std::string model_to_json_text(const Model& model) {
  model.network.validate();
  model.schema.validate();
  if (model.network.input_width() != model.schema.feature_count() ||
      model.network.output_width() != model.schema.label_count()) {
    throw DimensionError("model network does not match its schema");
  }
  json parameters;
  json arch = network_to_json(model.network, parameters);
  json training = nullptr;
  if (!model.metadata.training_config.empty()) {
    training = {{"config", json::parse(model.metadata.training_config)},
                {"fingerprint", model.metadata.training_fingerprint}};
  }
  json doc = {
      {"format", std::string(kModelFormatName)},
      {"format_version", kModelFormatVersion},
      {"metadata",
       {{"creator", model.metadata.creator},
        {"epochs_trained", model.metadata.epochs_trained}}},
      {"schema", detail::schema_to_json(model.schema)},
      {"architecture", std::move(arch)},
      {"parameters", std::move(parameters)},
      {"training", std::move(training)},
  };
  doc["checksum"] = checksum_of(doc);
  return doc.dump() + "\n";
}

Model model_from_json_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ModelError(std::string("malformed model file (truncated or not JSON): ") + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != kModelFormatName) {
    throw ModelError("not an fcfnn model file");
  }
  const json& version = doc["format_version"];
  if (!version.is_number_integer()) throw ModelError("model file has no format_version");
  if (version.get<long long>() != kModelFormatVersion) {
    throw ModelError("unsupported model format_version " + version.dump() +
                     " (this build reads version " + std::to_string(kModelFormatVersion) +
                     ")");
  }
  if (!doc.contains("checksum") || !doc["checksum"].is_string()) {
    throw ModelError("model file has no checksum");
  }
  const std::string stored = doc["checksum"].get<std::string>();
  doc.erase("checksum");
  const std::string actual = checksum_of(doc);
  if (stored != actual) {
    throw ModelError("model checksum mismatch: stored " + stored + ", computed " + actual);
  }

  Model model;
  try {
    model.schema = detail::schema_from_json(doc.at("schema"));
    model.network = network_from_json(doc.at("architecture"), doc.at("parameters"));
    const json& meta = doc.at("metadata");
    model.metadata.creator = meta.at("creator").get<std::string>();
    model.metadata.epochs_trained = meta.at("epochs_trained").get<std::size_t>();
    const json& training = doc.at("training");
    if (!training.is_null()) {
      model.metadata.training_config = training.at("config").dump();
      model.metadata.training_fingerprint = training.at("fingerprint").get<std::string>();
    }
  } catch (const json::exception& e) {
    throw ModelError(std::string("model file field error: ") + e.what());
  } catch (const ModelError&) {
    throw;
  } catch (const Error& e) {
    throw ModelError(std::string("inconsistent model: ") + e.what());
  }
  if (model.network.input_width() != model.schema.feature_count() ||
      model.network.output_width() != model.schema.label_count()) {
    throw ModelError("network " + std::to_string(model.network.input_width()) + "->" +
                     std::to_string(model.network.output_width()) +
                     " does not match the stored schema");
  }
  return model;
}

void save_model(const Model& model, const std::filesystem::path& path) {
  const std::string text = model_to_json_text(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void save_model(const Network& net, const SchemaSpec& schema,
                const std::filesystem::path& path) {
  save_model(Model{net, schema, {}}, path);
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return model_from_json_text(buf.str());
  } catch (const ModelError& e) {
    throw ModelError(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Prediction and ranking

Vector predict(const Network& net, const Vector& features) {
  if (features.size() != net.input_width()) {
    throw DimensionError("predict: " + std::to_string(features.size()) +
                         " features for a network with input width " +
                         std::to_string(net.input_width()));
  }
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (!std::isfinite(features[i])) {
      throw DataError("predict: feature " + std::to_string(i) + " is not finite");
    }
    if (features[i] < 0.0 || features[i] > 1.0) {
      warn("feature " + std::to_string(i) + " = " + format_double(features[i]) +
           " is outside [0, 1]");
    }
  }
  return infer(net, features);
}

RankedProfile rank(const Vector& probabilities, const SchemaSpec& schema,
                   std::string respondent) {
  if (probabilities.size() != schema.label_count()) {
    throw DimensionError("rank: " + std::to_string(probabilities.size()) +
                         " probabilities for " + std::to_string(schema.label_count()) +
                         " labels");
  }
  std::vector<std::size_t> order(probabilities.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return probabilities[a] > probabilities[b];
  });
  RankedProfile profile{std::move(respondent), {}};
  profile.entries.reserve(order.size());
  for (std::size_t i : order) {
    profile.entries.push_back({schema.labels[i].code, i, probabilities[i]});
  }
  return profile;
}

std::string format_report(const RankedProfile& profile, double threshold,
                          std::size_t max_entries) {
  std::size_t n = profile.entries.size();
  if (max_entries != 0) n = std::min(n, std::max<std::size_t>(max_entries, 1));
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < n; ++i) {
    const RankedEntry& e = profile.entries[i];
    const double pct = 100.0 * e.probability;
    if (e.probability >= threshold) {
      std::snprintf(buf, sizeof(buf), "%.1f%%", pct);
    } else {
      std::snprintf(buf, sizeof(buf), "%.1e%%", pct);
    }
    if (i) out += ", ";
    out += e.code + " " + buf;
  }
  return out;
}

std::vector<RankedProfile> classify_csv(const Model& model,
                                        const std::filesystem::path& in_path,
                                        const std::filesystem::path& out_path,
                                        std::size_t top_k) {
  const std::size_t n_labels = model.schema.label_count();
  if (top_k == 0 || top_k > n_labels) {
    throw ConfigError("top_k must be in [1, " + std::to_string(n_labels) + "], got " +
                      std::to_string(top_k));
  }
  RawTable table = parse_records(read_csv_file(in_path), model.schema,
                                 LabelPolicy::kOptional, in_path.string());

  CsvTable out = table.csv;
  for (std::size_t k = 1; k <= top_k; ++k) {
    out.header.push_back("rank" + std::to_string(k) + "_code");
    out.header.push_back("rank" + std::to_string(k) + "_prob");
  }
  std::vector<RankedProfile> profiles;
  profiles.reserve(table.records.size());
  for (std::size_t r = 0; r < table.records.size(); ++r) {
    const std::vector<double>& raw = table.records[r].features;
    Vector x(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
      x[i] = raw[i] / model.schema.features[i].denominator;
    }
    RankedProfile p = rank(predict(model.network, x), model.schema, std::to_string(r + 1));
    for (std::size_t k = 0; k < top_k; ++k) {
      out.rows[r].push_back(p.entries[k].code);
      out.rows[r].push_back(format_double(p.entries[k].probability));
    }
    profiles.push_back(std::move(p));
  }

  std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + out_path.string() + "' for writing");
  write_csv(file, out);
  if (!file) throw IoError("failed writing '" + out_path.string() + "'");
  return profiles;
}

}  // namespace fcfnn
