#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace sedvel::io {

/// Regular lon/lat raster in the plain-text grid format: six header lines
/// (ncols, nrows, xllcorner, yllcorner, cellsize, NODATA_value) followed by
/// row-major values, first row northernmost. No-data cells are NaN in memory.
struct AsciiGrid {
  std::size_t ncols = 0;
  std::size_t nrows = 0;
  double xll = 0.0;  ///< lower-left corner longitude
  double yll = 0.0;  ///< lower-left corner latitude
  double cellsize = 1.0;
  double nodata = -9999.0;
  std::vector<double> values;

  double& at(std::size_t row, std::size_t col) { return values[row * ncols + col]; }
  double at(std::size_t row, std::size_t col) const { return values[row * ncols + col]; }
  double cell_lon(std::size_t col) const { return xll + (static_cast<double>(col) + 0.5) * cellsize; }
  double cell_lat(std::size_t row) const {
    return yll + (static_cast<double>(nrows - row) - 0.5) * cellsize;
  }
  /// Same geometry, values set to NaN.
  AsciiGrid blank_like() const;
};

AsciiGrid parse_ascii_grid(const std::string& text, const std::string& source = "<memory>");
AsciiGrid read_ascii_grid(const std::filesystem::path& path);
/// Exact shortest-round-trip formatting: parse(format(g)) reproduces g bit for
/// bit, and format(parse(text)) reproduces text written by this function.
std::string format_ascii_grid(const AsciiGrid& g);
void write_ascii_grid(const AsciiGrid& g, const std::filesystem::path& path);

}  // namespace sedvel::io
