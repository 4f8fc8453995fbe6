// Copyright 2026 The fcfnn Authors
// SPDX-License-Identifier: Apache-2.0

#include "fcfnn/synth.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <sstream>

#include "fcfnn/error.hpp"
#include "test_support.hpp"

namespace fcfnn {
namespace {

using testing::TempDir;

std::string csv_text(const SyntheticData& d) {
  std::ostringstream out;
  d.write_csv(out);
  return out.str();
}

// Sorted-copy median, written independently of the library helper.
double oracle_median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<LabeledRow> random_rows(std::size_t n, std::size_t width, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<LabeledRow> rows(n);
  for (std::size_t r = 0; r < n; ++r) {
    rows[r].features = Vector(width);
    for (double& v : rows[r].features) v = rng.uniform();
    rows[r].label = r % 5;
  }
  return rows;
}

void expect_medians_preserved(const std::vector<LabeledRow>& src,
                              const std::vector<LabeledRow>& out, double tol) {
  const std::size_t width = src.front().features.size();
  for (std::size_t f = 0; f < width; ++f) {
    std::vector<double> a, b;
    for (const auto& r : src) a.push_back(r.features[f]);
    for (const auto& r : out) b.push_back(r.features[f]);
    EXPECT_NEAR(oracle_median(b), oracle_median(a), tol) << "feature " << f;
  }
}

// ---------------------------------------------------------------------------
// Config

TEST(GeneratorConfig, DefaultsReachNineHundredThirtySixRows) {
  const GeneratorConfig cfg;
  EXPECT_EQ(cfg.n_rows, 936u);
  EXPECT_EQ(cfg.n_classes, 29u);
  EXPECT_EQ(cfg.n_features, 35u);
  EXPECT_EQ(cfg.resolved_base_rows(), 17u);
  EXPECT_EQ(cfg.resolved_discriminative_features(), 24u);
  EXPECT_NO_THROW(cfg.validate());
}

TEST(GeneratorConfig, UnreachableRowCountIsAnError) {
  GeneratorConfig cfg;
  cfg.base_rows_per_class = 16;  // 29 * 16 * 2 = 928 < 936
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg.n_rows = 928;
  EXPECT_NO_THROW(cfg.validate());
  for (auto mutate : std::vector<void (*)(GeneratorConfig&)>{
           [](GeneratorConfig& c) { c.n_classes = 1; },
           [](GeneratorConfig& c) { c.n_features = 0; },
           [](GeneratorConfig& c) { c.augmentation_factor = 0; },
           [](GeneratorConfig& c) { c.noise_sd = -1; },
           [](GeneratorConfig& c) { c.discriminative_features = 99; },
       }) {
    GeneratorConfig c;
    mutate(c);
    EXPECT_THROW(c.validate(), ConfigError);
  }
}

TEST(GeneratorConfig, JsonRoundTripAndUnknownKeys) {
  GeneratorConfig cfg;
  cfg.seed = 9;
  cfg.noise_sd = 0.1;
  cfg.emit_indicators = true;
  const GeneratorConfig back = GeneratorConfig::from_json_text(cfg.to_json_text());
  EXPECT_EQ(back.to_json_text(), cfg.to_json_text());
  EXPECT_EQ(GeneratorConfig::from_json_text(R"({"seed": 3})").n_rows, 936u);
  EXPECT_THROW(GeneratorConfig::from_json_text(R"({"rows": 3})"), ConfigError);
  EXPECT_THROW(GeneratorConfig::from_json_text("[1]"), ConfigError);
  EXPECT_THROW(GeneratorConfig::from_json_text(R"({"n_rows": "many"})"), ConfigError);
  TempDir dir;
  testing::write_file(dir / "g.json", cfg.to_json_text());
  EXPECT_EQ(load_generator_config(dir / "g.json").to_json_text(), cfg.to_json_text());
}

// ---------------------------------------------------------------------------
// Archetypes and sampling

TEST(Archetypes, DeterministicWithDistinctClasses) {
  const GeneratorConfig cfg;
  const auto a = make_archetypes(cfg);
  const auto b = make_archetypes(cfg);
  ASSERT_EQ(a.size(), 29u);
  for (std::size_t c = 0; c < 29; ++c) {
    EXPECT_EQ(a[c].class_index, c);
    EXPECT_EQ(a[c].feature_means, b[c].feature_means);
  }
}

TEST(Archetypes, SeparatedOverDiscriminativeFeaturesForManySeeds) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    const auto arch = make_archetypes(cfg);
    const std::size_t n_disc = cfg.resolved_discriminative_features();
    double closest = 1.0;
    for (std::size_t i = 0; i < arch.size(); ++i) {
      for (std::size_t j = i + 1; j < arch.size(); ++j) {
        double d = 0.0;
        for (std::size_t f = 0; f < n_disc; ++f) {
          d = std::max(d, std::abs(arch[i].feature_means[f] - arch[j].feature_means[f]));
        }
        closest = std::min(closest, d);
      }
    }
    EXPECT_GE(closest, 0.15) << "seed " << seed;
    // Non-discriminative features share one mean.
    for (const Archetype& a : arch) {
      for (std::size_t f = n_disc; f < cfg.n_features; ++f) {
        EXPECT_EQ(a.feature_means[f], arch[0].feature_means[f]);
      }
    }
  }
}

TEST(SampleRespondent, ZeroNoiseReturnsMeans) {
  GeneratorConfig cfg;
  cfg.noise_sd = 0.0;
  const Archetype a = make_archetypes(cfg)[3];
  Rng rng(1);
  EXPECT_EQ(sample_unit_features(a, rng), a.feature_means);
  const RawRecord r = sample_respondent(a, SchemaSpec::paper_default(), rng);
  EXPECT_EQ(r.label, 3u);
}

TEST(SampleRespondent, StaysInSchemaRanges) {
  GeneratorConfig cfg;
  cfg.noise_sd = 0.5;  // heavy clamping
  const auto arch = make_archetypes(cfg);
  const SchemaSpec s = SchemaSpec::paper_default();
  Rng rng(2);
  for (int t = 0; t < 500; ++t) {
    const RawRecord r = sample_respondent(arch[t % 29], s, rng);
    for (std::size_t f = 0; f < 35; ++f) {
      EXPECT_GE(r.features[f], 0.0);
      EXPECT_LE(r.features[f], s.features[f].denominator);
    }
  }
}

TEST(SampleRespondent, MonteCarloMeanMatchesArchetype) {
  const GeneratorConfig cfg;  // noise_sd 0.05
  const Archetype a = make_archetypes(cfg)[0];
  Rng rng(3);
  Vector sum(cfg.n_features);
  constexpr int kDraws = 10000;
  for (int t = 0; t < kDraws; ++t) {
    const Vector x = sample_unit_features(a, rng);
    for (std::size_t f = 0; f < x.size(); ++f) sum[f] += x[f];
  }
  for (std::size_t f = 0; f < sum.size(); ++f) {
    EXPECT_NEAR(sum[f] / kDraws, a.feature_means[f], 0.01) << "feature " << f;
  }
}

// ---------------------------------------------------------------------------
// Median-preserving augmentation

TEST(AugmentMedian, ZeroDeltaDuplicatesRows) {
  const auto src = random_rows(7, 4, 1);
  Rng rng(1);
  const auto out = augment_median(src, 2, 0.0, rng);
  ASSERT_EQ(out.size(), 14u);
  for (std::size_t r = 0; r < 7; ++r) {
    EXPECT_EQ(out[2 * r].features, src[r].features);
    EXPECT_EQ(out[2 * r + 1].features, src[r].features);
    EXPECT_EQ(out[2 * r].label, src[r].label);
  }
  expect_medians_preserved(src, out, 0.0);
}

TEST(AugmentMedian, SingleRowBecomesMirroredPair) {
  const std::vector<LabeledRow> src{{Vector{0.3, 0.99, 0.0}, 4}};
  Rng rng(2);
  const auto out = augment_median(src, 2, 0.05, rng);
  ASSERT_EQ(out.size(), 2u);
  for (std::size_t f = 0; f < 3; ++f) {
    EXPECT_NEAR(0.5 * (out[0].features[f] + out[1].features[f]), src[0].features[f], 1e-15);
  }
  EXPECT_EQ(out[0].label, 4u);
  EXPECT_EQ(out[1].label, 4u);
}

TEST(AugmentMedian, FourHundredSixtyEightRowsDoubleWithMediansKept) {
  const auto src = random_rows(468, 35, 3);
  Rng rng(3);
  const auto out = augment_median(src, 2, 0.02, rng);
  ASSERT_EQ(out.size(), 936u);
  expect_medians_preserved(src, out, 1e-9);
}

TEST(AugmentMedian, OddCountsLargeDeltasAndOtherFactors) {
  for (std::size_t n : {1u, 2u, 3u, 5u, 10u, 51u}) {
    for (std::size_t copies : {1u, 2u, 3u, 4u}) {
      for (double delta : {0.0, 0.02, 0.3}) {
        const auto src = random_rows(n, 6, n * 100 + copies);
        Rng rng(n + copies);
        const auto out = augment_median(src, copies, delta, rng);
        ASSERT_EQ(out.size(), n * copies);
        for (const auto& r : out) {
          for (double v : r.features) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
          }
        }
        expect_medians_preserved(src, out, 1e-9);
      }
    }
  }
}

TEST(AugmentMedian, PreservesMedianWithTiesAndBoundaryValues) {
  std::vector<LabeledRow> src;
  for (double v : {0.0, 0.0, 0.5, 0.5, 0.5, 1.0, 1.0, 0.5}) src.push_back({Vector{v}, 0});
  Rng rng(4);
  const auto out = augment_median(src, 2, 0.1, rng);
  expect_medians_preserved(src, out, 1e-12);
}

TEST(AugmentMedian, RejectsBadInput) {
  Rng rng(5);
  EXPECT_THROW(augment_median({}, 2, 0.1, rng), DimensionError);
  EXPECT_THROW(augment_median(random_rows(3, 2, 1), 0, 0.1, rng), ConfigError);
  auto ragged = random_rows(3, 2, 1);
  ragged[1].features = Vector(3);
  EXPECT_THROW(augment_median(ragged, 2, 0.1, rng), DimensionError);
}

TEST(Median, OddAndEvenCounts) {
  EXPECT_EQ(median({3, 1, 2}), 2.0);
  EXPECT_EQ(median({4, 1, 3, 2}), 2.5);
  EXPECT_THROW(median({}), DimensionError);
}

// ---------------------------------------------------------------------------
// End-to-end generation

TEST(Generate, DefaultConfigGivesNineHundredThirtySixLabeledRows) {
  const SyntheticData d = generate(GeneratorConfig{});
  EXPECT_EQ(d.records.size(), 936u);
  EXPECT_EQ(d.schema, SchemaSpec::paper_default());
  const CsvTable t = d.to_csv();
  EXPECT_EQ(t.header.size(), 36u);
  EXPECT_EQ(t.header.back(), "label");
  std::map<std::size_t, std::size_t> counts;
  for (const RawRecord& r : d.records) {
    ASSERT_TRUE(r.label.has_value());
    ++counts[*r.label];
    for (std::size_t f = 0; f < 35; ++f) {
      EXPECT_GE(r.features[f], 0.0);
      EXPECT_LE(r.features[f], d.schema.features[f].denominator);
    }
  }
  ASSERT_EQ(counts.size(), 29u);
  std::size_t lo = 936, hi = 0;
  for (auto [label, c] : counts) {
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  EXPECT_LE(hi - lo, 2u);
}

TEST(Generate, ByteIdenticalForTheSameConfig) {
  GeneratorConfig cfg;
  cfg.seed = 7;
  EXPECT_EQ(csv_text(generate(cfg)), csv_text(generate(cfg)));
  GeneratorConfig other = cfg;
  other.seed = 8;
  EXPECT_NE(csv_text(generate(cfg)), csv_text(generate(other)));
}

TEST(Generate, CsvLoadsBackThroughThePipeline) {
  GeneratorConfig cfg;
  cfg.emit_indicators = true;
  const SyntheticData d = generate(cfg);
  TempDir dir;
  d.save_csv(dir / "s.csv");
  const Dataset loaded = load_dataset(dir / "s.csv", d.schema);
  const Dataset direct = d.dataset();
  ASSERT_EQ(loaded.size(), direct.size());
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    EXPECT_EQ(loaded.rows[i].label, direct.rows[i].label);
    EXPECT_EQ(loaded.rows[i].features, direct.rows[i].features);
  }
  EXPECT_EQ(d.to_csv().header.size(), 36u + 29u);
}

TEST(Generate, TwoClassZeroNoiseSetIsLinearlySeparable) {
  GeneratorConfig cfg;
  cfg.n_rows = 40;
  cfg.n_classes = 2;
  cfg.n_features = 5;
  cfg.noise_sd = 0.0;
  const SyntheticData d = generate(cfg);
  EXPECT_EQ(d.schema, SchemaSpec::generic(5, 2));
  const Dataset ds = d.dataset();
  // Threshold on the feature whose class means differ most: a linear rule.
  const auto arch = make_archetypes(cfg);
  std::size_t best = 0;
  for (std::size_t f = 1; f < 5; ++f) {
    if (std::abs(arch[0].feature_means[f] - arch[1].feature_means[f]) >
        std::abs(arch[0].feature_means[best] - arch[1].feature_means[best])) {
      best = f;
    }
  }
  const double cut = 0.5 * (arch[0].feature_means[best] + arch[1].feature_means[best]);
  const bool zero_high = arch[0].feature_means[best] > cut;
  std::size_t correct = 0;
  for (const Sample& s : ds.rows) {
    const std::size_t guess = (s.features[best] > cut) == zero_high ? 0 : 1;
    correct += guess == s.label;
  }
  EXPECT_EQ(correct, ds.size());
}

TEST(Generate, SchemaMismatchIsAConfigError) {
  GeneratorConfig cfg;
  cfg.n_classes = 5;
  cfg.n_rows = 50;
  EXPECT_THROW(generate(cfg, SchemaSpec::paper_default()), ConfigError);
  EXPECT_NO_THROW(generate(cfg));
}

}  // namespace
}  // namespace fcfnn
