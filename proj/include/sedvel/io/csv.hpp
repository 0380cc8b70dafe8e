#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace sedvel::io {

/// Minimal comma-separated table: a header row plus string cells. Quoting is
/// not supported; none of the project's formats need it.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  ///< source line of each row

  /// Index of a column; throws DataError if absent.
  std::size_t column(std::string_view name) const;
};

/// Whole file as a string; throws DataError when it cannot be opened.
std::string read_text(const std::filesystem::path& path);

CsvTable read_csv(const std::filesystem::path& path);
CsvTable parse_csv(std::string_view text, const std::string& source = "<memory>");

/// Throws DataError unless the header matches exactly (order included).
void require_header(const CsvTable& t, const std::vector<std::string>& expected,
                    const std::string& source);

double parse_double(std::string_view cell, const std::string& context);

/// Empty cell maps to NaN.
double parse_optional_double(std::string_view cell, const std::string& context);

/// 6 significant digits, the project's CSV convention.
std::string fmt6(double v);

/// Geographic coordinate, fixed 6 decimals (about 0.1 m).
std::string fmt_coord(double deg);

/// Shortest representation that round-trips exactly.
std::string fmt_exact(double v);

}  // namespace sedvel::io
