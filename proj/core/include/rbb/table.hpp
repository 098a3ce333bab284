#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rbb {

/// Column-ordered result table shared by every CSV/JSON writer.
/// An empty cell means "absent" (e.g. a capped measurement).
struct ResultTable {
  std::string experiment;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Throws std::out_of_range for unknown columns.
  std::size_t column(const std::string& name) const;
};

std::string format_double(double v);
std::string format_optional(const std::optional<double>& v);
std::string format_optional(const std::optional<std::uint64_t>& v);

void write_csv(std::ostream& out, const ResultTable& table);
/// JSON array of objects; absent cells become null, numeric cells numbers.
void write_json(std::ostream& out, const ResultTable& table);

/// Parses CSV produced by write_csv (no quoting needed for our cells).
ResultTable read_csv(std::istream& in);

}  // namespace rbb
