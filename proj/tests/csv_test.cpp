// Copyright 2026 The fcfnn Authors
// SPDX-License-Identifier: Apache-2.0

#include "fcfnn/csv.hpp"

#include <gtest/gtest.h>

#include <bit>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>

#include "fcfnn/error.hpp"
#include "test_support.hpp"

namespace fcfnn {
namespace {

CsvTable parse(const std::string& text) {
  std::istringstream in(text);
  return read_csv(in, "t.csv");
}

TEST(ReadCsv, HeaderAndRows) {
  const CsvTable t = parse("a,b,c\n1,2,3\n4,5,6\n");
  EXPECT_EQ(t.header, (std::vector<std::string>{"a", "b", "c"}));
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[1], (std::vector<std::string>{"4", "5", "6"}));
}

TEST(ReadCsv, QuotedFieldsCrlfBomAndBlankLines) {
  const CsvTable t = parse("\xEF\xBB\xBFname,note\r\n\"x,y\",\"say \"\"hi\"\"\"\r\n\r\nz,\"multi\nline\"\r\n");
  EXPECT_EQ(t.header[0], "name");
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0][0], "x,y");
  EXPECT_EQ(t.rows[0][1], "say \"hi\"");
  EXPECT_EQ(t.rows[1][1], "multi\nline");
}

TEST(ReadCsv, NoTrailingNewline) {
  const CsvTable t = parse("a\n1");
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0][0], "1");
}

TEST(ReadCsv, ErrorsCarryLocation) {
  EXPECT_THROW(parse(""), DataError);
  try {
    parse("a,b\n1,2\n3\n");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("t.csv:3"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse("a\n\"open\n"), DataError);
}

TEST(ReadCsvFile, MissingFileIsIoError) {
  EXPECT_THROW(read_csv_file("/nonexistent/dir/x.csv"), IoError);
}

TEST(WriteCsv, QuotesWhenNeededAndRoundTrips) {
  CsvTable t{{"a", "b,c"}, {{"plain", "with \"quote\""}, {"line\nbreak", ""}}};
  std::ostringstream out;
  write_csv(out, t);
  EXPECT_EQ(out.str(),
            "a,\"b,c\"\nplain,\"with \"\"quote\"\"\"\n\"line\nbreak\",\n");
  const CsvTable back = parse(out.str());
  EXPECT_EQ(back.header, t.header);
  EXPECT_EQ(back.rows, t.rows);
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(100.0), "100");
  EXPECT_EQ(format_double(-2.5), "-2.5");
  std::mt19937_64 g(1);
  for (int i = 0; i < 10000; ++i) {
    const double x = std::bit_cast<double>(g());
    if (!std::isfinite(x)) continue;
    const auto back = parse_double(format_double(x));
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(std::bit_cast<std::uint64_t>(*back), std::bit_cast<std::uint64_t>(x));
  }
}

TEST(ParseDouble, AcceptsDecimalNumbersOnly) {
  EXPECT_EQ(parse_double("  42 "), 42.0);
  EXPECT_EQ(parse_double("+1.5"), 1.5);
  EXPECT_EQ(parse_double("1e-3"), 1e-3);
  EXPECT_FALSE(parse_double("").has_value());
  EXPECT_FALSE(parse_double("1,5").has_value());
  EXPECT_FALSE(parse_double("abc").has_value());
  EXPECT_FALSE(parse_double("3x").has_value());
}

}  // namespace
}  // namespace fcfnn
