// Copyright 2026 The fcfnn Authors
// SPDX-License-Identifier: Apache-2.0

#include "fcfnn/data.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "fcfnn/error.hpp"
#include "test_support.hpp"

namespace fcfnn {
namespace {

using testing::TempDir;
using testing::WarningCapture;
using testing::write_file;

SchemaSpec small_schema() {
  SchemaSpec s;
  s.features = {{"Age", FeatureKind::kAge, 65},
                {"AT", FeatureKind::kPercentage, 100},
                {"RPT", FeatureKind::kPersonalityType, 14}};
  s.labels = {{"CVW"}, {"EA"}, {"SC"}};
  return s;
}

CsvTable table_from(const std::string& text) {
  std::istringstream in(text);
  return read_csv(in);
}

Dataset numbered_dataset(std::size_t n) {
  Dataset ds{SchemaSpec::generic(1, 2), {}};
  for (std::size_t i = 0; i < n; ++i) {
    ds.rows.push_back({Vector{static_cast<double>(i) / static_cast<double>(n)}, i % 2});
  }
  return ds;
}

// ---------------------------------------------------------------------------
// Loading

TEST(ParseRecords, ResolvesColumnsByNameInAnyOrder) {
  const RawTable t = parse_records(table_from("RPT,label,Age,AT\n7,EA,30,50\n14,2,65,0\n"),
                                   small_schema(), LabelPolicy::kRequired);
  ASSERT_EQ(t.records.size(), 2u);
  EXPECT_EQ(t.records[0].features, (std::vector<double>{30, 50, 7}));
  EXPECT_EQ(t.records[0].label, 1u);
  EXPECT_EQ(t.records[1].label, 2u);
  EXPECT_TRUE(t.ignored_columns.empty());
}

TEST(ParseRecords, MissingColumnErrorNamesTheColumn) {
  try {
    parse_records(table_from("Age,RPT,label\n1,2,0\n"), small_schema(), LabelPolicy::kRequired);
    FAIL();
  } catch (const DataError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("AT"), std::string::npos) << msg;
    EXPECT_EQ(msg.find("Age"), std::string::npos) << msg;
  }
}

TEST(ParseRecords, ExtraColumnsAreIgnoredWithAWarning) {
  WarningCapture warnings;
  const RawTable t = parse_records(
      table_from("id,Age,AT,RPT,label,comment\n9,1,2,3,0,hello\n"), small_schema(),
      LabelPolicy::kRequired);
  EXPECT_EQ(t.ignored_columns, (std::vector<std::string>{"id", "comment"}));
  ASSERT_EQ(warnings.messages().size(), 1u);
  EXPECT_NE(warnings.messages()[0].find("comment"), std::string::npos);
  EXPECT_EQ(t.records[0].features, (std::vector<double>{1, 2, 3}));
}

TEST(ParseRecords, IndicatorColumnsGiveArgmaxLabel) {
  const RawTable t = parse_records(
      table_from("Age,AT,RPT,CVW,EA,SC\n1,2,3,0,1,0\n1,2,3,0.2,0.1,0.7\n1,2,3,0.5,0.5,0\n"),
      small_schema(), LabelPolicy::kRequired);
  EXPECT_EQ(t.records[0].label, 1u);
  EXPECT_EQ(t.records[1].label, 2u);
  EXPECT_EQ(t.records[2].label, 0u);  // first column wins ties
}

TEST(ParseRecords, LabelColumnTakesPrecedenceOverIndicators) {
  const RawTable t = parse_records(table_from("Age,AT,RPT,CVW,EA,SC,label\n1,2,3,1,0,0,SC\n"),
                                   small_schema(), LabelPolicy::kRequired);
  EXPECT_EQ(t.records[0].label, 2u);
}

TEST(ParseRecords, LabelsOptionalForPrediction) {
  const RawTable t = parse_records(table_from("Age,AT,RPT\n1,2,3\n"), small_schema(),
                                   LabelPolicy::kOptional);
  EXPECT_FALSE(t.records[0].label.has_value());
  EXPECT_THROW(parse_records(table_from("Age,AT,RPT\n1,2,3\n"), small_schema(),
                             LabelPolicy::kRequired),
               DataError);
}

TEST(ParseRecords, BadCellsReportRowAndColumn) {
  try {
    parse_records(table_from("Age,AT,RPT,label\n1,2,3,0\n1,x,3,0\n"), small_schema(),
                  LabelPolicy::kRequired, "s.csv");
    FAIL();
  } catch (const DataError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("s.csv:3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("AT"), std::string::npos) << msg;
  }
  EXPECT_THROW(parse_records(table_from("Age,AT,RPT,label\n1,2,3,ZZ\n"), small_schema(),
                             LabelPolicy::kRequired),
               DataError);
  EXPECT_THROW(parse_records(table_from("Age,AT,RPT,label\n1,2,3,3\n"), small_schema(),
                             LabelPolicy::kRequired),
               DataError);
  EXPECT_THROW(parse_records(table_from("Age,Age,AT,RPT,label\n1,1,2,3,0\n"), small_schema(),
                             LabelPolicy::kRequired),
               DataError);
}

TEST(LoadCsv, SixtyFourColumnFileWithIndicators) {
  const SchemaSpec s = SchemaSpec::paper_default();
  std::ostringstream text;
  for (const auto& f : s.features) text << f.code << ',';
  for (std::size_t i = 0; i < s.labels.size(); ++i) {
    text << s.labels[i].code << (i + 1 < s.labels.size() ? ',' : '\n');
  }
  for (std::size_t r = 0; r < 936; ++r) {
    for (std::size_t f = 0; f < s.features.size(); ++f) text << (r % 10) << ',';
    for (std::size_t l = 0; l < s.labels.size(); ++l) {
      text << (l == r % 29 ? 1 : 0) << (l + 1 < s.labels.size() ? ',' : '\n');
    }
  }
  TempDir dir;
  write_file(dir / "d.csv", text.str());
  const RawTable t = load_csv(dir / "d.csv", s);
  EXPECT_EQ(t.csv.header.size(), 64u);
  EXPECT_EQ(t.records.size(), 936u);
  const Dataset ds = load_dataset(dir / "d.csv", s);
  EXPECT_EQ(ds.size(), 936u);
  EXPECT_EQ(ds.rows[30].label, 1u);
}

TEST(LoadCsv, EmptyAndMissingFiles) {
  TempDir dir;
  write_file(dir / "empty.csv", "");
  EXPECT_THROW(load_csv(dir / "empty.csv", small_schema()), DataError);
  EXPECT_THROW(load_csv(dir / "absent.csv", small_schema()), IoError);
}

// ---------------------------------------------------------------------------
// Normalization

TEST(Normalize, RuleExamples) {
  const SchemaSpec s = small_schema();
  EXPECT_EQ(normalize(std::vector<double>{65, 100, 7}, s), (Vector{1.0, 1.0, 0.5}));
  EXPECT_EQ(normalize(std::vector<double>{0, 0, 0}, s), (Vector{0, 0, 0}));
}

TEST(Normalize, OutOfRangeErrorNamesColumnAndValue) {
  try {
    normalize(std::vector<double>{30, 101, 7}, small_schema());
    FAIL();
  } catch (const DataError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("AT"), std::string::npos) << msg;
    EXPECT_NE(msg.find("101"), std::string::npos) << msg;
  }
  EXPECT_THROW(normalize(std::vector<double>{-1, 0, 0}, small_schema()), DataError);
  EXPECT_THROW(normalize(std::vector<double>{1, 2}, small_schema()), DimensionError);
}

TEST(Normalize, RoundTripsThroughDenominators) {
  const SchemaSpec s = SchemaSpec::paper_default();
  std::mt19937_64 g(3);
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> raw(35);
    for (std::size_t i = 0; i < 35; ++i) {
      raw[i] = std::uniform_real_distribution<double>(0, s.features[i].denominator)(g);
    }
    const Vector x = normalize(raw, s);
    for (double v : x) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
    const std::vector<double> back = denormalize(x, s);
    for (std::size_t i = 0; i < 35; ++i) EXPECT_NEAR(back[i], raw[i], 1e-12);
  }
}

TEST(MakeDataset, RequiresLabelsAndInRangeValues) {
  const SchemaSpec s = small_schema();
  RawTable t = parse_records(table_from("Age,AT,RPT\n1,2,3\n"), s, LabelPolicy::kOptional);
  EXPECT_THROW(make_dataset(t, s), DataError);
  t = parse_records(table_from("Age,AT,RPT,label\n1,2,15,0\n"), s, LabelPolicy::kRequired);
  EXPECT_THROW(make_dataset(t, s), DataError);
}

// ---------------------------------------------------------------------------
// Split and batching

TEST(Split, TakesFloorOfValidationFraction) {
  const SplitDataset s = split(numbered_dataset(936), 0.1, 42);
  EXPECT_EQ(s.validation.size(), 93u);
  EXPECT_EQ(s.train.size(), 843u);
}

TEST(Split, PartitionsRowsDisjointly) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 50 + seed * 7;
    const SplitDataset s = split(numbered_dataset(n), 0.25, seed);
    std::vector<std::size_t> all = s.train_rows;
    all.insert(all.end(), s.validation_rows.begin(), s.validation_rows.end());
    std::sort(all.begin(), all.end());
    std::vector<std::size_t> want(n);
    std::iota(want.begin(), want.end(), 0);
    EXPECT_EQ(all, want);
    for (std::size_t i = 0; i < s.train_rows.size(); ++i) {
      EXPECT_EQ(s.train.rows[i].features, numbered_dataset(n).rows[s.train_rows[i]].features);
    }
  }
}

TEST(Split, DeterministicPerSeed) {
  const Dataset ds = numbered_dataset(100);
  EXPECT_EQ(split(ds, 0.1, 1).validation_rows, split(ds, 0.1, 1).validation_rows);
  EXPECT_NE(split(ds, 0.1, 1).validation_rows, split(ds, 0.1, 2).validation_rows);
}

TEST(Split, DegenerateSplitsAreErrors) {
  const Dataset ds = numbered_dataset(10);
  EXPECT_EQ(split(ds, 0.99, 1).validation.size(), 9u);
  EXPECT_EQ(split(ds, 0.999, 1).train.size(), 1u);
  EXPECT_THROW(split(ds, 0.05, 1), ConfigError);
  EXPECT_THROW(split(ds, 0.0, 1), ConfigError);
  EXPECT_THROW(split(ds, 1.0, 1), ConfigError);
  EXPECT_THROW(split(numbered_dataset(1), 0.5, 1), ConfigError);
}

TEST(BatchIter, SizesFollowCeilingDivision) {
  const auto b = batch_iter(843, 20, 42, 1);
  ASSERT_EQ(b.size(), 43u);
  for (std::size_t i = 0; i < 42; ++i) EXPECT_EQ(b[i].size(), 20u);
  EXPECT_EQ(b.back().size(), 3u);
  EXPECT_EQ(batch_iter(843, 843, 1, 1).size(), 1u);
  EXPECT_EQ(batch_iter(843, 1, 1, 1).size(), 843u);
  EXPECT_EQ(batch_iter(numbered_dataset(10), 4, 1, 1).size(), 3u);
  EXPECT_THROW(batch_iter(10, 0, 1, 1), ConfigError);
}

TEST(BatchIter, EachEpochCoversEveryRowOnceAndReshuffles) {
  std::vector<std::size_t> previous;
  for (std::uint64_t epoch = 1; epoch <= 5; ++epoch) {
    const auto batches = batch_iter(97, 20, 7, epoch);
    std::vector<std::size_t> order;
    for (const auto& b : batches) order.insert(order.end(), b.begin(), b.end());
    std::vector<std::size_t> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < 97; ++i) ASSERT_EQ(sorted[i], i);
    EXPECT_NE(order, previous);
    EXPECT_EQ(batches, batch_iter(97, 20, 7, epoch));
    previous = order;
  }
}

}  // namespace
}  // namespace fcfnn
