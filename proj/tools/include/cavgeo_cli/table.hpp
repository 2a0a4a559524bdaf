#pragma once

#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace cavgeo::cli {

using Cell = std::variant<std::string, double, long long, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
  nlohmann::json to_json() const;
};

enum class Format { kCsv, kJson };

Format parse_format(const std::string& name);

/// Doubles use 12 significant digits; strings are quoted when needed.
void write_csv(std::ostream& out, const Table& table);

struct Result {
  Table table;
  nlohmann::json document;  ///< nested report; defaults to {"rows": table}
  Format preferred = Format::kCsv;
  std::vector<std::string> warnings;
};

void write_result(std::ostream& out, const Result& result, Format format);

}  // namespace cavgeo::cli
