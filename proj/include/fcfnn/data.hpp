// Copyright 2026 The fcfnn Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FCFNN_DATA_HPP_
#define FCFNN_DATA_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fcfnn/csv.hpp"
#include "fcfnn/linalg.hpp"
#include "fcfnn/schema.hpp"

namespace fcfnn {

/// Name of the optional single-column label (class index or direction code).
inline constexpr std::string_view kLabelColumn = "label";

enum class LabelPolicy { kRequired, kOptional };

/// One respondent in raw survey units, features in schema order.
struct RawRecord {
  std::vector<double> features;
  std::optional<std::size_t> label;
};

struct RawTable {
  CsvTable csv;  // the file as read, for verbatim re-emission
  std::vector<RawRecord> records;
  std::vector<std::string> ignored_columns;
};

/// Resolves schema columns by header name and parses every row.
///
/// Labels come from the `label` column if present (an index or a direction
/// code), otherwise from the schema's direction indicator columns (the
/// largest indicator wins, first on ties). Unknown columns are ignored with a
/// warning. Throws DataError listing missing columns, or naming the line and
/// column of an unparsable value.
RawTable load_csv(const std::filesystem::path& path, const SchemaSpec& schema,
                  LabelPolicy labels = LabelPolicy::kRequired);
RawTable parse_records(CsvTable csv, const SchemaSpec& schema,
                       LabelPolicy labels, std::string_view source = "<csv>");

/// raw[i] / denominator[i]. Throws DataError naming the column and value when
/// a raw value lies outside [0, denominator].
Vector normalize(std::span<const double> raw, const SchemaSpec& schema);

/// features[i] * denominator[i]
std::vector<double> denormalize(const Vector& features, const SchemaSpec& schema);

struct Sample {
  Vector features;  // normalized, in [0, 1]
  std::size_t label = 0;
};

struct Dataset {
  SchemaSpec schema;
  std::vector<Sample> rows;

  std::size_t size() const { return rows.size(); }
  bool empty() const { return rows.empty(); }
};

/// Normalizes every record. All records must carry a label.
Dataset make_dataset(const RawTable& table, const SchemaSpec& schema);
Dataset load_dataset(const std::filesystem::path& path, const SchemaSpec& schema);

struct SplitDataset {
  Dataset train;
  Dataset validation;
  double vs = 0.0;
  std::vector<std::size_t> train_rows;       // indices into the source dataset
  std::vector<std::size_t> validation_rows;
};

/// Seeded shuffle, then the last floor(n * vs) rows become validation.
/// Throws ConfigError when vs is outside (0, 1) or either side would be empty.
SplitDataset split(const Dataset& ds, double vs, std::uint64_t seed);

/// Row indices of each mini-batch for one epoch. The order is reshuffled from
/// (seed, epoch); the last batch may be short.
std::vector<std::vector<std::size_t>> batch_iter(std::size_t n, std::size_t bs,
                                                 std::uint64_t seed,
                                                 std::uint64_t epoch);
std::vector<std::vector<std::size_t>> batch_iter(const Dataset& ds, std::size_t bs,
                                                 std::uint64_t seed,
                                                 std::uint64_t epoch);

}  // namespace fcfnn

#endif  // FCFNN_DATA_HPP_
