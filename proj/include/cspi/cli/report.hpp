#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace cspi::cli {

// Empty cells are std::monostate.
using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;
using Row = std::vector<Cell>;

struct Verdict {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct Report {
  std::string command;
  std::vector<std::string> columns;
  std::vector<Row> rows;
  std::vector<Verdict> verdicts;
  std::vector<std::string> warnings;
  nlohmann::json config;

  bool passed() const;
};

// Doubles with 17 significant digits.
std::string format_double(double x);

// Header row plus one line per row, ',' separated, '\n' terminated.
std::string to_csv(const Report& report);

// {command, config, columns, rows, verdicts, warnings, pass}; non-finite
// doubles become strings ("nan", "inf", "-inf").
nlohmann::json to_json(const Report& report);

}  // namespace cspi::cli
