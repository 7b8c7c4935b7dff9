#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hddcor {

// Comma-separated text with a required header row. Fields may be quoted
// with '"' (doubled quotes escape a quote). CRLF line endings and a leading
// UTF-8 byte-order mark are accepted.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::string& path);

// Empty (or all-blank) cell -> nullopt; otherwise the whole cell must parse
// as a finite decimal number with '.' separator.
std::optional<double> parse_numeric_cell(std::string_view cell);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace hddcor
