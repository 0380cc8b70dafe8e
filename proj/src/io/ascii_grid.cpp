#include "sedvel/io/ascii_grid.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "sedvel/errors.hpp"
#include "sedvel/io/csv.hpp"

namespace sedvel::io {

AsciiGrid AsciiGrid::blank_like() const {
  AsciiGrid g = *this;
  g.values.assign(ncols * nrows, std::numeric_limits<double>::quiet_NaN());
  return g;
}

AsciiGrid parse_ascii_grid(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  AsciiGrid g;
  const char* keys[] = {"ncols", "nrows", "xllcorner", "yllcorner", "cellsize", "NODATA_value"};
  double header[6] = {};
  for (int i = 0; i < 6; ++i) {
    std::string key, value;
    if (!(in >> key >> value)) throw DataError(source + ": truncated grid header");
    if (key != keys[i])
      throw DataError(source + ": expected header key '" + keys[i] + "', found '" + key + "'");
    header[i] = parse_double(value, source + " header " + key);
  }
  if (header[0] < 1 || header[1] < 1 || header[0] != std::floor(header[0]) ||
      header[1] != std::floor(header[1]))
    throw DataError(source + ": ncols/nrows must be positive integers");
  if (!(header[4] > 0.0)) throw DataError(source + ": cellsize must be > 0");
  g.ncols = static_cast<std::size_t>(header[0]);
  g.nrows = static_cast<std::size_t>(header[1]);
  g.xll = header[2];
  g.yll = header[3];
  g.cellsize = header[4];
  g.nodata = header[5];
  g.values.reserve(g.ncols * g.nrows);
  std::string token;
  while (in >> token) {
    double v = parse_double(token, source + " value");
    if (v == g.nodata) v = std::numeric_limits<double>::quiet_NaN();
    g.values.push_back(v);
  }
  if (g.values.size() != g.ncols * g.nrows)
    throw DataError(source + ": expected " + std::to_string(g.ncols * g.nrows) + " values, found " +
                    std::to_string(g.values.size()));
  return g;
}

AsciiGrid read_ascii_grid(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_ascii_grid(ss.str(), path.string());
}

std::string format_ascii_grid(const AsciiGrid& g) {
  std::string out;
  out += "ncols " + std::to_string(g.ncols) + "\n";
  out += "nrows " + std::to_string(g.nrows) + "\n";
  out += "xllcorner " + fmt_exact(g.xll) + "\n";
  out += "yllcorner " + fmt_exact(g.yll) + "\n";
  out += "cellsize " + fmt_exact(g.cellsize) + "\n";
  out += "NODATA_value " + fmt_exact(g.nodata) + "\n";
  const std::string nodata = fmt_exact(g.nodata);
  for (std::size_t r = 0; r < g.nrows; ++r) {
    for (std::size_t c = 0; c < g.ncols; ++c) {
      const double v = g.at(r, c);
      if (c) out += ' ';
      out += std::isnan(v) ? nodata : fmt_exact(v);
    }
    out += '\n';
  }
  return out;
}

void write_ascii_grid(const AsciiGrid& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << format_ascii_grid(g);
}

}  // namespace sedvel::io
