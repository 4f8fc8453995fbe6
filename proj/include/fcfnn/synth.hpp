// Copyright 2026 The fcfnn Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FCFNN_SYNTH_HPP_
#define FCFNN_SYNTH_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "fcfnn/data.hpp"
#include "fcfnn/linalg.hpp"
#include "fcfnn/rng.hpp"
#include "fcfnn/schema.hpp"

namespace fcfnn {

/// Latent respondent cohort for one direction, in normalized units.
struct Archetype {
  std::size_t class_index = 0;
  Vector feature_means;  // in [0, 1]
  Vector noise_sd;       // >= 0
};

struct GeneratorConfig {
  std::size_t n_rows = 936;
  std::size_t n_classes = 29;
  std::size_t n_features = 35;
  std::uint64_t seed = 42;
  /// Source respondents per class before augmentation. 0 picks the smallest
  /// count for which n_classes * base * augmentation_factor >= n_rows.
  std::size_t base_rows_per_class = 0;
  /// Output rows per source row (pairs of mirrored perturbations, plus the
  /// original row when odd).
  std::size_t augmentation_factor = 2;
  double noise_sd = 0.05;
  /// Upper bound of the per-feature augmentation perturbation.
  double augment_delta = 0.02;
  /// Leading features whose means differ between classes; the rest share one
  /// mean. 0 picks ceil(2/3 * n_features).
  std::size_t discriminative_features = 0;
  /// Minimum pairwise L-infinity distance of archetype means over the
  /// discriminative features.
  double min_separation = 0.15;
  /// Also emit one indicator column per direction next to `label`.
  bool emit_indicators = false;

  std::size_t resolved_base_rows() const;
  std::size_t resolved_discriminative_features() const;

  /// Throws ConfigError on inconsistent settings, including an n_rows that
  /// base rows and augmentation cannot reach.
  void validate() const;

  std::string to_json_text() const;
  static GeneratorConfig from_json_text(std::string_view text);
};

GeneratorConfig load_generator_config(const std::filesystem::path& path);

/// One archetype per class, deterministic in cfg.seed. Means of different
/// classes are at least cfg.min_separation apart (L-infinity) over the
/// discriminative features.
std::vector<Archetype> make_archetypes(const GeneratorConfig& cfg);

/// Normalized features: mean + N(0, sd^2), clamped to [0, 1].
Vector sample_unit_features(const Archetype& a, Rng& rng);

/// sample_unit_features scaled to raw survey units by the schema
/// denominators; label = a.class_index.
RawRecord sample_respondent(const Archetype& a, const SchemaSpec& schema, Rng& rng);

struct LabeledRow {
  Vector features;  // normalized
  std::size_t label = 0;
};

/// Median-preserving multiplication. Each source row becomes `copies` rows:
/// copies/2 mirrored pairs (r + d, r - d) with d uniform in [0, max_delta]
/// per feature, plus r itself when `copies` is odd. Values stay in [0, 1],
/// and rows below (above) a feature's median are kept at or below (above)
/// the middle order statistics, so every per-feature median of the output
/// equals the source median. Output keeps source order, copies adjacent.
std::vector<LabeledRow> augment_median(const std::vector<LabeledRow>& rows,
                                       std::size_t copies, double max_delta,
                                       Rng& rng);

/// Lower median for odd counts, midpoint of the middle pair for even counts.
double median(std::vector<double> values);

struct SyntheticData {
  SchemaSpec schema;
  std::vector<RawRecord> records;  // raw units, every record labeled
  bool emit_indicators = false;

  Dataset dataset() const;
  CsvTable to_csv() const;
  void write_csv(std::ostream& out) const;
  void save_csv(const std::filesystem::path& path) const;
};

/// Archetypes -> base respondents -> median-preserving augmentation ->
/// truncation to n_rows. Rows are interleaved across classes so truncation
/// keeps class counts within augmentation_factor of each other.
SyntheticData generate(const GeneratorConfig& cfg, const SchemaSpec& schema);

/// Uses the built-in 35-feature, 29-direction schema when the sizes match it, else
/// SchemaSpec::generic.
SyntheticData generate(const GeneratorConfig& cfg);

}  // namespace fcfnn

#endif  // FCFNN_SYNTH_HPP_
