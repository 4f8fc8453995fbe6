// Copyright 2026 The fcfnn Authors
// SPDX-License-Identifier: Apache-2.0

#include "fcfnn/data.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <numeric>

#include "fcfnn/error.hpp"
#include "fcfnn/log.hpp"
#include "fcfnn/rng.hpp"
#include "streams.hpp"

namespace fcfnn {
namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ", ";
    out += s;
  }
  return out;
}

std::optional<std::size_t> parse_label_cell(std::string_view cell,
                                            const SchemaSpec& schema) {
  if (auto idx = schema.label_index(cell)) return idx;
  std::size_t value = 0;
  auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec == std::errc() && end == cell.data() + cell.size() &&
      value < schema.label_count()) {
    return value;
  }
  return std::nullopt;
}

}  // namespace

RawTable parse_records(CsvTable csv, const SchemaSpec& schema,
                       LabelPolicy labels, std::string_view source) {
  schema.validate();
  std::map<std::string, std::size_t> column_of;
  for (std::size_t c = 0; c < csv.header.size(); ++c) {
    if (!column_of.emplace(csv.header[c], c).second) {
      throw DataError(std::string(source) + ": duplicate column '" + csv.header[c] + "'");
    }
  }

  std::vector<std::string> missing;
  std::vector<std::size_t> feature_cols;
  for (const FeatureColumn& f : schema.features) {
    auto it = column_of.find(f.code);
    if (it == column_of.end()) {
      missing.push_back(f.code);
    } else {
      feature_cols.push_back(it->second);
    }
  }

  std::optional<std::size_t> label_col;
  std::vector<std::size_t> indicator_cols;
  if (auto it = column_of.find(std::string(kLabelColumn)); it != column_of.end()) {
    label_col = it->second;
  }
  std::vector<std::string> missing_indicators;
  for (const LabelColumn& l : schema.labels) {
    auto it = column_of.find(l.code);
    if (it == column_of.end()) {
      missing_indicators.push_back(l.code);
    } else {
      indicator_cols.push_back(it->second);
    }
  }
  const bool have_indicators = missing_indicators.empty();
  if (labels == LabelPolicy::kRequired && !label_col && !have_indicators) {
    missing.insert(missing.end(), missing_indicators.begin(), missing_indicators.end());
  }
  if (!missing.empty()) {
    throw DataError(std::string(source) + ": missing columns: " + join(missing));
  }

  RawTable table;
  for (const std::string& name : csv.header) {
    if (schema.feature_index(name) || schema.label_index(name) || name == kLabelColumn) {
      continue;
    }
    table.ignored_columns.push_back(name);
  }
  if (!table.ignored_columns.empty()) {
    warn(std::string(source) + ": ignoring unknown columns: " + join(table.ignored_columns));
  }

  auto value_at = [&](std::size_t row, std::size_t col) {
    const std::string& cell = csv.rows[row][col];
    auto v = parse_double(cell);
    if (!v || !std::isfinite(*v)) {
      throw DataError(std::string(source) + ":" + std::to_string(row + 2) + ": column '" +
                      csv.header[col] + "': cannot parse '" + cell + "' as a number");
    }
    return *v;
  };

  table.records.reserve(csv.rows.size());
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    RawRecord rec;
    rec.features.reserve(feature_cols.size());
    for (std::size_t col : feature_cols) rec.features.push_back(value_at(r, col));
    if (label_col) {
      const std::string& cell = csv.rows[r][*label_col];
      rec.label = parse_label_cell(cell, schema);
      if (!rec.label && (labels == LabelPolicy::kRequired || !cell.empty())) {
        throw DataError(std::string(source) + ":" + std::to_string(r + 2) +
                        ": column 'label': '" + cell +
                        "' is neither a direction code nor a class index");
      }
    } else if (have_indicators) {
      std::size_t best = 0;
      double best_value = -INFINITY;
      for (std::size_t k = 0; k < indicator_cols.size(); ++k) {
        const double v = value_at(r, indicator_cols[k]);
        if (v > best_value) {
          best_value = v;
          best = k;
        }
      }
      if (!(best_value > 0.0)) {
        if (labels == LabelPolicy::kRequired) {
          throw DataError(std::string(source) + ":" + std::to_string(r + 2) +
                          ": no direction indicator is positive");
        }
      } else {
        rec.label = best;
      }
    }
    table.records.push_back(std::move(rec));
  }
  table.csv = std::move(csv);
  return table;
}

RawTable load_csv(const std::filesystem::path& path, const SchemaSpec& schema,
                  LabelPolicy labels) {
  return parse_records(read_csv_file(path), schema, labels, path.string());
}

Vector normalize(std::span<const double> raw, const SchemaSpec& schema) {
  if (raw.size() != schema.feature_count()) {
    throw DimensionError("normalize: " + std::to_string(raw.size()) +
                         " raw values for " + std::to_string(schema.feature_count()) +
                         " schema features");
  }
  Vector out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const FeatureColumn& f = schema.features[i];
    if (!(raw[i] >= 0.0 && raw[i] <= f.denominator)) {
      throw DataError("column '" + f.code + "': value " + format_double(raw[i]) +
                      " outside [0, " + format_double(f.denominator) + "]");
    }
    out[i] = raw[i] / f.denominator;
  }
  return out;
}

std::vector<double> denormalize(const Vector& features, const SchemaSpec& schema) {
  if (features.size() != schema.feature_count()) {
    throw DimensionError("denormalize: feature vector " + shape_string(features) +
                         " vs " + std::to_string(schema.feature_count()) + " schema features");
  }
  std::vector<double> raw(features.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    raw[i] = features[i] * schema.features[i].denominator;
  }
  return raw;
}

Dataset make_dataset(const RawTable& table, const SchemaSpec& schema) {
  Dataset ds;
  ds.schema = schema;
  ds.rows.reserve(table.records.size());
  for (std::size_t r = 0; r < table.records.size(); ++r) {
    const RawRecord& rec = table.records[r];
    if (!rec.label) {
      throw DataError("row " + std::to_string(r + 1) + " has no label");
    }
    try {
      ds.rows.push_back({normalize(rec.features, schema), *rec.label});
    } catch (const DataError& e) {
      throw DataError("row " + std::to_string(r + 1) + ": " + e.what());
    }
  }
  return ds;
}

Dataset load_dataset(const std::filesystem::path& path, const SchemaSpec& schema) {
  try {
    return make_dataset(load_csv(path, schema), schema);
  } catch (const DataError& e) {
    const std::string msg = e.what();
    if (msg.starts_with(path.string())) throw;
    throw DataError(path.string() + ": " + msg);
  }
}

SplitDataset split(const Dataset& ds, double vs, std::uint64_t seed) {
  if (!(vs > 0.0 && vs < 1.0)) {
    throw ConfigError("validation split must be in (0, 1), got " + format_double(vs));
  }
  const std::size_t n = ds.size();
  const auto n_val = static_cast<std::size_t>(std::floor(static_cast<double>(n) * vs));
  if (n_val == 0 || n_val >= n) {
    throw ConfigError("validation split " + format_double(vs) + " of " + std::to_string(n) +
                      " rows leaves an empty " + (n_val == 0 ? "validation" : "training") +
                      " set");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(seed, streams::kSplit));
  rng.shuffle(std::span<std::size_t>(order));

  SplitDataset out;
  out.vs = vs;
  out.train.schema = ds.schema;
  out.validation.schema = ds.schema;
  out.train_rows.assign(order.begin(), order.end() - static_cast<std::ptrdiff_t>(n_val));
  out.validation_rows.assign(order.end() - static_cast<std::ptrdiff_t>(n_val), order.end());
  for (std::size_t i : out.train_rows) out.train.rows.push_back(ds.rows[i]);
  for (std::size_t i : out.validation_rows) out.validation.rows.push_back(ds.rows[i]);
  return out;
}

std::vector<std::vector<std::size_t>> batch_iter(std::size_t n, std::size_t bs,
                                                 std::uint64_t seed,
                                                 std::uint64_t epoch) {
  if (bs == 0) throw ConfigError("batch size must be at least 1");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(seed, streams::kBatches, epoch));
  rng.shuffle(std::span<std::size_t>(order));
  std::vector<std::vector<std::size_t>> batches;
  for (std::size_t start = 0; start < n; start += bs) {
    const std::size_t end = std::min(n, start + bs);
    batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                         order.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return batches;
}

std::vector<std::vector<std::size_t>> batch_iter(const Dataset& ds, std::size_t bs,
                                                 std::uint64_t seed,
                                                 std::uint64_t epoch) {
  return batch_iter(ds.size(), bs, seed, epoch);
}

}  // namespace fcfnn
