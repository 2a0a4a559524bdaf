#include "cavgeo_cli/table.hpp"

#include <cstdio>

#include "cavgeo/errors.hpp"

namespace cavgeo::cli {

namespace {

std::string format_cell(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) {
    if (s->find_first_of(",\"\n") == std::string::npos) return *s;
    std::string q = "\"";
    for (char ch : *s) {
      if (ch == '"') q += '"';
      q += ch;
    }
    return q + "\"";
  }
  if (const auto* d = std::get_if<double>(&c)) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", *d);
    return buf;
  }
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<bool>(c) ? "true" : "false";
}

nlohmann::json cell_json(const Cell& c) {
  return std::visit([](const auto& v) { return nlohmann::json(v); }, c);
}

}  // namespace

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::logic_error("Table::add: row width does not match columns");
  rows.push_back(std::move(row));
}

nlohmann::json Table::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t i = 0; i < columns.size(); ++i) obj[columns[i]] = cell_json(row[i]);
    out.push_back(std::move(obj));
  }
  return out;
}

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::kCsv;
  if (name == "json") return Format::kJson;
  throw ConfigError("--format: expected csv or json, got '" + name + "'");
}

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << format_cell(table.columns[i]);
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_cell(row[i]);
    out << '\n';
  }
}

void write_result(std::ostream& out, const Result& result, Format format) {
  if (format == Format::kCsv) {
    write_csv(out, result.table);
    return;
  }
  const nlohmann::json doc =
      result.document.is_null() ? nlohmann::json{{"rows", result.table.to_json()}} : result.document;
  out << doc.dump(2) << '\n';
}

}  // namespace cavgeo::cli
