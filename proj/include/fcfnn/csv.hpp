// Copyright 2026 The fcfnn Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FCFNN_CSV_HPP_
#define FCFNN_CSV_HPP_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fcfnn {

/// Comma-separated text with a header row. Cells are kept verbatim.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Parses RFC 4180 style CSV (double-quoted fields, "" escapes, LF or CRLF).
/// Every row must have as many fields as the header. Blank lines are skipped.
/// Throws DataError naming `source` and the line on malformed input, and on a
/// file without a header.
CsvTable read_csv(std::istream& in, std::string_view source = "<stream>");
CsvTable read_csv_file(const std::filesystem::path& path);

void write_csv_row(std::ostream& out, std::span<const std::string> fields);
void write_csv(std::ostream& out, const CsvTable& table);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

/// Parses a complete decimal number (surrounding spaces allowed).
std::optional<double> parse_double(std::string_view text);

}  // namespace fcfnn

#endif  // FCFNN_CSV_HPP_
