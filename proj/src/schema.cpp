// Copyright 2026 The fcfnn Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "fcfnn/error.hpp"
#include "schema_json.hpp"

namespace fcfnn {

std::string_view to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::kAge:
      return "age";
    case FeatureKind::kPercentage:
      return "percentage";
    case FeatureKind::kPersonalityType:
      return "personality_type";
    case FeatureKind::kCustom:
      return "custom";
  }
  return "unknown";
}

std::optional<FeatureKind> parse_feature_kind(std::string_view name) {
  if (name == "age") return FeatureKind::kAge;
  if (name == "percentage") return FeatureKind::kPercentage;
  if (name == "personality_type") return FeatureKind::kPersonalityType;
  if (name == "custom") return FeatureKind::kCustom;
  return std::nullopt;
}

void SchemaSpec::validate() const {
  if (features.empty()) throw DataError("schema has no feature columns");
  if (labels.empty()) throw DataError("schema has no label columns");
  std::set<std::string> seen;
  for (const FeatureColumn& f : features) {
    if (f.code.empty()) throw DataError("schema feature with empty code");
    if (!(f.denominator > 0.0) || !std::isfinite(f.denominator)) {
      throw DataError("schema feature '" + f.code +
                      "' needs a positive denominator");
    }
    if (!seen.insert(f.code).second) {
      throw DataError("duplicate schema column code '" + f.code + "'");
    }
  }
  for (const LabelColumn& l : labels) {
    if (l.code.empty()) throw DataError("schema label with empty code");
    if (!seen.insert(l.code).second) {
      throw DataError("duplicate schema column code '" + l.code + "'");
    }
  }
}

std::optional<std::size_t> SchemaSpec::label_index(std::string_view code) const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].code == code) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> SchemaSpec::feature_index(std::string_view code) const {
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (features[i].code == code) return i;
  }
  return std::nullopt;
}

namespace {

std::string numbered(char prefix, std::size_t n) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%c%02zu", prefix, n);
  return buf;
}

}  // namespace

SchemaSpec SchemaSpec::paper_default(double max_age) {
  // Positions (1-based) of the survey columns whose codes are known.
  const std::map<std::size_t, FeatureColumn> known_features = {
      {1, {"Age", FeatureKind::kAge, max_age}},
      {10, {"AT", FeatureKind::kPercentage, kMaxPercentage}},
      {11, {"TT2", FeatureKind::kPercentage, kMaxPercentage}},
      {12, {"RPT", FeatureKind::kPersonalityType, kMaxPersonalityType}},
      {13, {"IPT", FeatureKind::kPersonalityType, kMaxPersonalityType}},
      {14, {"APT", FeatureKind::kPersonalityType, kMaxPersonalityType}},
  };
  const std::map<std::size_t, std::string> known_labels = {
      {1, "CVW"}, {2, "EA"}, {4, "EM"}, {5, "EU"}, {6, "H"}, {19, "SC"},
  };
  SchemaSpec s;
  for (std::size_t i = 1; i <= 35; ++i) {
    auto it = known_features.find(i);
    s.features.push_back(it != known_features.end()
                             ? it->second
                             : FeatureColumn{numbered('F', i), FeatureKind::kPercentage,
                                             kMaxPercentage});
  }
  for (std::size_t i = 1; i <= 29; ++i) {
    auto it = known_labels.find(i);
    s.labels.push_back({it != known_labels.end() ? it->second : numbered('D', i)});
  }
  return s;
}

SchemaSpec SchemaSpec::generic(std::size_t n_features, std::size_t n_labels) {
  SchemaSpec s;
  for (std::size_t i = 1; i <= n_features; ++i) {
    s.features.push_back({numbered('F', i), FeatureKind::kPercentage, kMaxPercentage});
  }
  for (std::size_t i = 1; i <= n_labels; ++i) s.labels.push_back({numbered('D', i)});
  return s;
}

namespace detail {

nlohmann::json schema_to_json(const SchemaSpec& schema) {
  nlohmann::json features = nlohmann::json::array();
  for (const FeatureColumn& f : schema.features) {
    features.push_back({{"code", f.code},
                        {"kind", std::string(to_string(f.kind))},
                        {"denominator", f.denominator}});
  }
  nlohmann::json labels = nlohmann::json::array();
  for (const LabelColumn& l : schema.labels) labels.push_back({{"code", l.code}});
  return {{"features", features}, {"labels", labels}};
}

SchemaSpec schema_from_json(const nlohmann::json& doc) {
  SchemaSpec s;
  try {
    for (const auto& f : doc.at("features")) {
      FeatureColumn col;
      col.code = f.at("code").get<std::string>();
      const std::string kind = f.value("kind", std::string("percentage"));
      auto parsed = parse_feature_kind(kind);
      if (!parsed) throw DataError("schema feature '" + col.code + "': unknown kind '" + kind + "'");
      col.kind = *parsed;
      switch (col.kind) {
        case FeatureKind::kAge:
          col.denominator = kDefaultMaxAge;
          break;
        case FeatureKind::kPercentage:
          col.denominator = kMaxPercentage;
          break;
        case FeatureKind::kPersonalityType:
          col.denominator = kMaxPersonalityType;
          break;
        case FeatureKind::kCustom:
          if (!f.contains("denominator")) {
            throw DataError("schema feature '" + col.code +
                            "': custom kind needs a denominator");
          }
          break;
      }
      if (f.contains("denominator")) col.denominator = f.at("denominator").get<double>();
      s.features.push_back(std::move(col));
    }
    for (const auto& l : doc.at("labels")) {
      s.labels.push_back({l.at("code").get<std::string>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed schema: ") + e.what());
  }
  s.validate();
  return s;
}

}  // namespace detail

std::string SchemaSpec::to_json_text() const {
  return detail::schema_to_json(*this).dump(2) + "\n";
}

SchemaSpec SchemaSpec::from_json_text(std::string_view text) {
  nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw DataError("schema is not valid JSON");
  return detail::schema_from_json(doc);
}

SchemaSpec load_schema(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open schema '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return SchemaSpec::from_json_text(buf.str());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void save_schema(const SchemaSpec& schema, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << schema.to_json_text();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace fcfnn
