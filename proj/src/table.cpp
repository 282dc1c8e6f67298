#include "adnoise/table.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "adnoise/errors.hpp"

namespace adnoise::table {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

namespace {
std::string cell_text(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) return format_double(*d);
  if (const std::int64_t* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return quote(std::get<std::string>(c));
}
}  // namespace

std::string render(const Table& t, const std::vector<std::string>& header) {
  std::string out;
  for (const std::string& line : header) out += "# " + line + "\n";
  for (const std::string& line : t.notes) out += "# " + line + "\n";
  for (std::size_t k = 0; k < t.columns.size(); ++k) {
    const Column& c = t.columns[k];
    if (k) out += ',';
    out += quote(c.unit.empty() ? c.name : c.name + " [" + c.unit + "]");
  }
  out += '\n';
  for (const auto& row : t.rows) {
    if (row.size() != t.columns.size())
      throw ConfigError("table '" + t.name + "': row width does not match the columns");
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out += ',';
      out += cell_text(row[k]);
    }
    out += '\n';
  }
  return out;
}

void emit_table(const Table& t, const std::vector<std::string>& header,
                const std::filesystem::path& path) {
  const std::string text = render(t, header);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  f << text;
  if (!f) throw std::runtime_error("write to '" + path.string() + "' failed");
}

}  // namespace adnoise::table
