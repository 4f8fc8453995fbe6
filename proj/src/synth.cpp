// Copyright 2026 The fcfnn Authors
// SPDX-License-Identifier: Apache-2.0

#include "fcfnn/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fcfnn/error.hpp"
#include "streams.hpp"

namespace fcfnn {

// ---------------------------------------------------------------------------
// Config

std::size_t GeneratorConfig::resolved_base_rows() const {
  if (base_rows_per_class != 0) return base_rows_per_class;
  const std::size_t per_base = n_classes * augmentation_factor;
  if (per_base == 0) return 0;
  return (n_rows + per_base - 1) / per_base;
}

std::size_t GeneratorConfig::resolved_discriminative_features() const {
  if (discriminative_features != 0) return discriminative_features;
  return (2 * n_features + 2) / 3;
}

void GeneratorConfig::validate() const {
  if (n_classes < 2) throw ConfigError("generator needs at least 2 classes");
  if (n_features == 0) throw ConfigError("generator needs at least 1 feature");
  if (n_rows == 0) throw ConfigError("generator needs at least 1 row");
  if (augmentation_factor == 0) throw ConfigError("augmentation factor must be at least 1");
  if (!(noise_sd >= 0.0)) throw ConfigError("noise sd must be >= 0");
  if (!(augment_delta >= 0.0)) throw ConfigError("augmentation delta must be >= 0");
  if (resolved_discriminative_features() > n_features) {
    throw ConfigError("discriminative features exceed feature count");
  }
  if (!(min_separation >= 0.0 && min_separation <= 1.0)) {
    throw ConfigError("min separation must be in [0, 1]");
  }
  const std::size_t reachable = n_classes * resolved_base_rows() * augmentation_factor;
  if (reachable < n_rows) {
    throw ConfigError("cannot reach " + std::to_string(n_rows) + " rows: " +
                      std::to_string(n_classes) + " classes x " +
                      std::to_string(resolved_base_rows()) + " base rows x " +
                      std::to_string(augmentation_factor) + " = " +
                      std::to_string(reachable));
  }
}

std::string GeneratorConfig::to_json_text() const {
  nlohmann::json doc = {
      {"n_rows", n_rows},
      {"n_classes", n_classes},
      {"n_features", n_features},
      {"seed", seed},
      {"base_rows_per_class", base_rows_per_class},
      {"augmentation_factor", augmentation_factor},
      {"noise_sd", noise_sd},
      {"augment_delta", augment_delta},
      {"discriminative_features", discriminative_features},
      {"min_separation", min_separation},
      {"emit_indicators", emit_indicators},
  };
  return doc.dump(2) + "\n";
}

GeneratorConfig GeneratorConfig::from_json_text(std::string_view text) {
  nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw ConfigError("generator config is not a JSON object");
  }
  GeneratorConfig c;
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "n_rows") c.n_rows = value.get<std::size_t>();
      else if (key == "n_classes") c.n_classes = value.get<std::size_t>();
      else if (key == "n_features") c.n_features = value.get<std::size_t>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "base_rows_per_class") c.base_rows_per_class = value.get<std::size_t>();
      else if (key == "augmentation_factor") c.augmentation_factor = value.get<std::size_t>();
      else if (key == "noise_sd") c.noise_sd = value.get<double>();
      else if (key == "augment_delta") c.augment_delta = value.get<double>();
      else if (key == "discriminative_features") c.discriminative_features = value.get<std::size_t>();
      else if (key == "min_separation") c.min_separation = value.get<double>();
      else if (key == "emit_indicators") c.emit_indicators = value.get<bool>();
      else throw ConfigError("unknown generator config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed generator config: ") + e.what());
  }
  c.validate();
  return c;
}

GeneratorConfig load_generator_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open generator config '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return GeneratorConfig::from_json_text(buf.str());
}

// ---------------------------------------------------------------------------
// Archetypes and sampling

std::vector<Archetype> make_archetypes(const GeneratorConfig& cfg) {
  cfg.validate();
  const std::size_t n_disc = cfg.resolved_discriminative_features();
  Rng rng(derive_seed(cfg.seed, streams::kArchetypes));

  Vector shared(cfg.n_features);
  for (double& m : shared) m = rng.uniform(0.2, 0.8);

  constexpr int kMaxAttempts = 100000;
  std::vector<Archetype> out;
  out.reserve(cfg.n_classes);
  for (std::size_t c = 0; c < cfg.n_classes; ++c) {
    Archetype a{c, shared, Vector(cfg.n_features, cfg.noise_sd)};
    int attempt = 0;
    for (;; ++attempt) {
      if (attempt == kMaxAttempts) {
        throw ConfigError("cannot place " + std::to_string(cfg.n_classes) +
                          " archetypes " + format_double(cfg.min_separation) +
                          " apart over " + std::to_string(n_disc) + " features");
      }
      // Means stay clear of the clamp bounds at 0 and 1.
      for (std::size_t f = 0; f < n_disc; ++f) a.feature_means[f] = rng.uniform(0.1, 0.9);
      const bool separated = std::all_of(out.begin(), out.end(), [&](const Archetype& b) {
        double dist = 0.0;
        for (std::size_t f = 0; f < n_disc; ++f) {
          dist = std::max(dist, std::abs(a.feature_means[f] - b.feature_means[f]));
        }
        return dist >= cfg.min_separation;
      });
      if (separated) break;
    }
    out.push_back(std::move(a));
  }
  return out;
}

Vector sample_unit_features(const Archetype& a, Rng& rng) {
  Vector x(a.feature_means.size());
  for (std::size_t f = 0; f < x.size(); ++f) {
    const double sd = a.noise_sd[f];
    const double v = sd == 0.0 ? a.feature_means[f] : rng.normal(a.feature_means[f], sd);
    x[f] = std::clamp(v, 0.0, 1.0);
  }
  return x;
}

RawRecord sample_respondent(const Archetype& a, const SchemaSpec& schema, Rng& rng) {
  return {denormalize(sample_unit_features(a, rng), schema), a.class_index};
}

// ---------------------------------------------------------------------------
// Median-preserving augmentation

double median(std::vector<double> values) {
  if (values.empty()) throw DimensionError("median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

std::vector<LabeledRow> augment_median(const std::vector<LabeledRow>& rows,
                                       std::size_t copies, double max_delta,
                                       Rng& rng) {
  if (rows.empty()) throw DimensionError("augment_median needs at least one row");
  if (copies == 0) throw ConfigError("augment_median needs copies >= 1");
  if (!(max_delta >= 0.0)) throw ConfigError("augmentation delta must be >= 0");
  const std::size_t n = rows.size();
  const std::size_t width = rows.front().features.size();
  for (const LabeledRow& r : rows) {
    if (r.features.size() != width) throw DimensionError("augment_median: ragged rows");
  }
  const std::size_t pairs = copies / 2;

  // deltas[row][pair][feature]
  std::vector<std::vector<Vector>> deltas(n, std::vector<Vector>(pairs, Vector(width)));
  for (auto& per_row : deltas) {
    for (Vector& d : per_row) {
      for (double& v : d) v = rng.uniform(0.0, max_delta);
    }
  }

  // Per feature: the value bound for rows on each side of the median.
  // below[f][row] == true means the row sits in the lower half for f.
  std::vector<std::vector<bool>> lower_half(width, std::vector<bool>(n));
  std::vector<double> lower_bound(width), upper_bound(width);
  std::vector<std::size_t> middle_row(width, n);  // odd n only
  std::vector<std::size_t> order(n);
  for (std::size_t f = 0; f < width; ++f) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return rows[a].features[f] < rows[b].features[f];
    });
    if (n % 2 == 0) {
      for (std::size_t k = 0; k < n / 2; ++k) lower_half[f][order[k]] = true;
      lower_bound[f] = rows[order[n / 2 - 1]].features[f];
      upper_bound[f] = rows[order[n / 2]].features[f];
    } else {
      const std::size_t mid = order[n / 2];
      for (std::size_t k = 0; k < n / 2; ++k) lower_half[f][order[k]] = true;
      middle_row[f] = mid;
      // The middle row's pairs stay symmetric inside [0, 1]; all other rows
      // stay outside the band they span.
      const double x = rows[mid].features[f];
      const double room = std::min(x, 1.0 - x);
      double widest = 0.0;
      for (Vector& d : deltas[mid]) {
        d[f] = std::min(d[f], room);
        widest = std::max(widest, d[f]);
      }
      lower_bound[f] = x - widest;
      upper_bound[f] = x + widest;
    }
  }

  std::vector<LabeledRow> out;
  out.reserve(n * copies);
  for (std::size_t r = 0; r < n; ++r) {
    const LabeledRow& src = rows[r];
    auto place = [&](std::size_t f, double v) {
      v = std::clamp(v, 0.0, 1.0);
      if (middle_row[f] == r) return v;
      return lower_half[f][r] ? std::min(v, lower_bound[f]) : std::max(v, upper_bound[f]);
    };
    if (copies % 2 == 1) {
      LabeledRow row{Vector(width), src.label};
      for (std::size_t f = 0; f < width; ++f) row.features[f] = place(f, src.features[f]);
      out.push_back(std::move(row));
    }
    for (std::size_t p = 0; p < pairs; ++p) {
      LabeledRow up{Vector(width), src.label};
      LabeledRow down{Vector(width), src.label};
      for (std::size_t f = 0; f < width; ++f) {
        const double d = deltas[r][p][f];
        up.features[f] = place(f, src.features[f] + d);
        down.features[f] = place(f, src.features[f] - d);
      }
      out.push_back(std::move(up));
      out.push_back(std::move(down));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Generation

Dataset SyntheticData::dataset() const {
  Dataset ds;
  ds.schema = schema;
  ds.rows.reserve(records.size());
  for (const RawRecord& r : records) ds.rows.push_back({normalize(r.features, schema), *r.label});
  return ds;
}

CsvTable SyntheticData::to_csv() const {
  CsvTable t;
  for (const FeatureColumn& f : schema.features) t.header.push_back(f.code);
  t.header.emplace_back(kLabelColumn);
  if (emit_indicators) {
    for (const LabelColumn& l : schema.labels) t.header.push_back(l.code);
  }
  t.rows.reserve(records.size());
  for (const RawRecord& r : records) {
    std::vector<std::string> row;
    row.reserve(t.header.size());
    for (double v : r.features) row.push_back(format_double(v));
    row.push_back(std::to_string(*r.label));
    if (emit_indicators) {
      for (std::size_t k = 0; k < schema.label_count(); ++k) {
        row.emplace_back(k == *r.label ? "1" : "0");
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

void SyntheticData::write_csv(std::ostream& out) const { fcfnn::write_csv(out, to_csv()); }

void SyntheticData::save_csv(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_csv(out);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

SyntheticData generate(const GeneratorConfig& cfg, const SchemaSpec& schema) {
  cfg.validate();
  schema.validate();
  if (schema.feature_count() != cfg.n_features || schema.label_count() != cfg.n_classes) {
    throw ConfigError("schema has " + std::to_string(schema.feature_count()) +
                      " features / " + std::to_string(schema.label_count()) +
                      " labels, generator expects " + std::to_string(cfg.n_features) +
                      " / " + std::to_string(cfg.n_classes));
  }
  const std::vector<Archetype> archetypes = make_archetypes(cfg);
  const std::size_t base = cfg.resolved_base_rows();

  // Slot-major interleaving: respondent s of class 0, of class 1, ...
  Rng sampler(derive_seed(cfg.seed, streams::kRespondents));
  std::vector<LabeledRow> source;
  source.reserve(base * cfg.n_classes);
  for (std::size_t s = 0; s < base; ++s) {
    for (const Archetype& a : archetypes) {
      source.push_back({sample_unit_features(a, sampler), a.class_index});
    }
  }

  Rng augmenter(derive_seed(cfg.seed, streams::kAugment));
  std::vector<LabeledRow> rows =
      augment_median(source, cfg.augmentation_factor, cfg.augment_delta, augmenter);
  rows.resize(cfg.n_rows);

  SyntheticData out;
  out.schema = schema;
  out.emit_indicators = cfg.emit_indicators;
  out.records.reserve(rows.size());
  for (const LabeledRow& r : rows) {
    out.records.push_back({denormalize(r.features, schema), r.label});
  }
  return out;
}

SyntheticData generate(const GeneratorConfig& cfg) {
  const SchemaSpec builtin = SchemaSpec::paper_default();
  if (cfg.n_features == builtin.feature_count() && cfg.n_classes == builtin.label_count()) {
    return generate(cfg, builtin);
  }
  return generate(cfg, SchemaSpec::generic(cfg.n_features, cfg.n_classes));
}

}  // namespace fcfnn
