// Copyright 2026 The fcfnn Authors
// SPDX-License-Identifier: Apache-2.0

#include "fcfnn/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "fcfnn/error.hpp"

namespace fcfnn {
namespace {

// Splits one logical record starting at `pos`. Returns false at end of input.
// Quoted fields may span physical lines; `line` tracks the physical line.
bool next_record(std::string_view text, std::size_t& pos, std::size_t& line,
                 std::vector<std::string>& fields, std::string_view source) {
  fields.clear();
  if (pos >= text.size()) return false;
  std::string field;
  bool quoted = false;
  bool after_quote = false;
  const std::size_t start_line = line;
  while (pos < text.size()) {
    const char c = text[pos++];
    if (quoted) {
      if (c == '"') {
        if (pos < text.size() && text[pos] == '"') {
          field.push_back('"');
          ++pos;
        } else {
          quoted = false;
          after_quote = true;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      after_quote = false;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && pos < text.size() && text[pos] == '\n') ++pos;
      ++line;
      fields.push_back(std::move(field));
      return true;
    } else if (c == '"' && field.empty() && !after_quote) {
      quoted = true;
    } else if (after_quote) {
      throw DataError(std::string(source) + ":" + std::to_string(line) +
                      ": unexpected character after closing quote");
    } else {
      field.push_back(c);
    }
  }
  if (quoted) {
    throw DataError(std::string(source) + ":" + std::to_string(start_line) +
                    ": unterminated quoted field");
  }
  fields.push_back(std::move(field));
  return true;
}

bool is_blank(const std::vector<std::string>& fields) {
  return fields.size() == 1 && fields[0].find_first_not_of(" \t") == std::string::npos;
}

bool needs_quotes(std::string_view s) {
  return s.find_first_of(",\"\r\n") != std::string_view::npos;
}

}  // namespace

CsvTable read_csv(std::istream& in, std::string_view source) {
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (text.starts_with("\xEF\xBB\xBF")) text.erase(0, 3);

  CsvTable table;
  std::size_t pos = 0;
  std::size_t line = 1;
  std::vector<std::string> fields;
  bool have_header = false;
  while (true) {
    const std::size_t record_line = line;
    if (!next_record(text, pos, line, fields, source)) break;
    if (is_blank(fields)) continue;
    if (!have_header) {
      table.header = fields;
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw DataError(std::string(source) + ":" + std::to_string(record_line) +
                      ": expected " + std::to_string(table.header.size()) +
                      " fields, got " + std::to_string(fields.size()));
    }
    table.rows.push_back(fields);
  }
  if (!have_header) throw DataError(std::string(source) + ": empty file (no header row)");
  return table;
}

CsvTable read_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return read_csv(in, path.string());
}

void write_csv_row(std::ostream& out, std::span<const std::string> fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out << ',';
    const std::string& f = fields[i];
    if (!needs_quotes(f)) {
      out << f;
      continue;
    }
    out << '"';
    for (char c : f) {
      if (c == '"') out << '"';
      out << c;
    }
    out << '"';
  }
  out << '\n';
}

void write_csv(std::ostream& out, const CsvTable& table) {
  write_csv_row(out, table.header);
  for (const auto& row : table.rows) write_csv_row(out, row);
}

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

std::optional<double> parse_double(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) return std::nullopt;
  return value;
}

}  // namespace fcfnn
