#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace adnoise::table {

using Cell = std::variant<double, std::int64_t, std::string>;

struct Column {
  std::string name;
  std::string unit;  // empty for dimensionless columns
};

struct Table {
  std::string name;                // file stem
  std::vector<Column> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> notes;  // written as '#' comments after the header
};

/// CSV text: '#'-prefixed header lines, one "name [unit]" header row, RFC
/// 4180 quoting, doubles with 9 significant digits.  Throws ConfigError when
/// a row does not match the column count.
std::string render(const Table& t, const std::vector<std::string>& header);

/// render() to `path`; std::runtime_error on I/O failure.
void emit_table(const Table& t, const std::vector<std::string>& header,
                const std::filesystem::path& path);

std::string format_double(double v);
std::string quote(const std::string& field);

}  // namespace adnoise::table
