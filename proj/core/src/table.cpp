#include "rbb/table.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <stdexcept>

namespace rbb {

std::size_t ResultTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw std::out_of_range("ResultTable: no column '" + name + "'");
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string format_optional(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string{};
}

std::string format_optional(const std::optional<std::uint64_t>& v) {
  return v ? std::to_string(*v) : std::string{};
}

void write_csv(std::ostream& out, const ResultTable& table) {
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << cells[i];
    }
    out << '\n';
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
}

void write_json(std::ostream& out, const ResultTable& table) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < table.header.size() && i < row.size(); ++i) {
      const std::string& cell = row[i];
      if (cell.empty()) {
        obj[table.header[i]] = nullptr;
        continue;
      }
      std::int64_t as_int = 0;
      auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), as_int);
      if (ec == std::errc() && p == cell.data() + cell.size()) {
        obj[table.header[i]] = as_int;
        continue;
      }
      char* end = nullptr;
      const double as_double = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() + cell.size() && std::isfinite(as_double)) {
        obj[table.header[i]] = as_double;
      } else {
        obj[table.header[i]] = cell;
      }
    }
    doc.push_back(std::move(obj));
  }
  out << doc.dump(2) << '\n';
}

ResultTable read_csv(std::istream& in) {
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (char ch : line) {
      if (ch == ',') {
        cells.push_back(cell);
        cell.clear();
      } else if (ch != '\r') {
        cell.push_back(ch);
      }
    }
    cells.push_back(cell);
    return cells;
  };
  ResultTable table;
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("read_csv: empty input");
  table.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != table.header.size()) {
      throw std::invalid_argument("read_csv: row has " + std::to_string(cells.size()) +
                                  " cells, header has " + std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(cells));
  }
  return table;
}

}  // namespace rbb
