// Copyright 2026 The fcfnn Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FCFNN_SCHEMA_HPP_
#define FCFNN_SCHEMA_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fcfnn {

inline constexpr double kDefaultMaxAge = 70.0;
inline constexpr double kMaxPercentage = 100.0;
inline constexpr double kMaxPersonalityType = 14.0;

/// How a survey column is normalized: value / denominator, where the
/// denominator is max age, 100 for percentages, 14 for personality-type
/// scores, or user-supplied.
enum class FeatureKind { kAge, kPercentage, kPersonalityType, kCustom };

std::string_view to_string(FeatureKind kind);
std::optional<FeatureKind> parse_feature_kind(std::string_view name);

struct FeatureColumn {
  std::string code;
  FeatureKind kind = FeatureKind::kPercentage;
  double denominator = kMaxPercentage;

  bool operator==(const FeatureColumn&) const = default;
};

struct LabelColumn {
  std::string code;

  bool operator==(const LabelColumn&) const = default;
};

/// Ordered input features and output directions.
struct SchemaSpec {
  std::vector<FeatureColumn> features;
  std::vector<LabelColumn> labels;

  std::size_t feature_count() const { return features.size(); }
  std::size_t label_count() const { return labels.size(); }

  /// Throws DataError on empty column lists, non-positive denominators or
  /// duplicate codes.
  void validate() const;

  std::optional<std::size_t> label_index(std::string_view code) const;
  std::optional<std::size_t> feature_index(std::string_view code) const;

  /// 35 features / 29 directions. Known survey columns keep their codes
  /// (Age, AT, TT2, RPT, IPT, APT; directions CVW, EA, EM, EU, H, SC); the
  /// remaining positions use placeholders Fnn / Dnn numbered by position.
  static SchemaSpec paper_default(double max_age = kDefaultMaxAge);

  /// Percentage-kind placeholders F01.. and D01.. of the given sizes.
  static SchemaSpec generic(std::size_t n_features, std::size_t n_labels);

  std::string to_json_text() const;
  static SchemaSpec from_json_text(std::string_view text);

  bool operator==(const SchemaSpec&) const = default;
};

SchemaSpec load_schema(const std::filesystem::path& path);
void save_schema(const SchemaSpec& schema, const std::filesystem::path& path);

}  // namespace fcfnn

#endif  // FCFNN_SCHEMA_HPP_
