#include "sedvel/core/profile_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "sedvel/errors.hpp"
#include "sedvel/io/csv.hpp"

namespace sedvel::core {

namespace {
const std::vector<std::string> kHeader = {"id",          "lat",         "lon",
                                          "depth_top_m", "thickness_m", "vs_mps"};
}

std::vector<LayeredProfile> parse_profiles(const std::string& text, const std::string& source) {
  const auto table = io::parse_csv(text, source);
  io::require_header(table, kHeader, source);

  std::vector<LayeredProfile> out;
  std::set<std::string> seen;
  std::string current;
  std::vector<Layer> layers;
  std::optional<Location> loc;

  auto flush = [&] {
    if (layers.empty()) return;
    if (!seen.insert(current).second)
      throw DataError(source + ": rows of profile '" + current + "' are not contiguous");
    // Files carry 6 significant digits, so tops are snapped onto the
    // accumulated thicknesses when they agree to that precision.
    double top = 0.0;
    for (Layer& l : layers) {
      if (std::abs(l.top_m - top) <= 1e-5 * std::max(1.0, top)) l.top_m = top;
      top = l.top_m + l.thickness_m;
    }
    out.emplace_back(current, std::move(layers), Provenance::measured, loc);
    layers.clear();
  };

  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string ctx = source + ":" + std::to_string(table.line_numbers[r]);
    if (row[0].empty()) throw DataError(ctx + ": empty profile id");
    if (row[0] != current) {
      flush();
      current = row[0];
      const double lat = io::parse_optional_double(row[1], ctx);
      const double lon = io::parse_optional_double(row[2], ctx);
      if (std::isnan(lat) != std::isnan(lon)) throw DataError(ctx + ": lat and lon must both be set");
      loc = std::isnan(lat) ? std::nullopt : std::optional<Location>(Location{lat, lon});
    }
    layers.push_back({io::parse_double(row[3], ctx), io::parse_double(row[4], ctx),
                      io::parse_double(row[5], ctx)});
  }
  flush();
  return out;
}

std::vector<LayeredProfile> read_profiles(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_profiles(ss.str(), path.string());
}

std::string format_profiles(const std::vector<LayeredProfile>& profiles) {
  std::ostringstream os;
  os << "id,lat,lon,depth_top_m,thickness_m,vs_mps\n";
  for (const auto& p : profiles) {
    const std::string lat = p.location() ? io::fmt_coord(p.location()->lat) : "";
    const std::string lon = p.location() ? io::fmt_coord(p.location()->lon) : "";
    for (const Layer& l : p.layers())
      os << p.id() << ',' << lat << ',' << lon << ',' << io::fmt6(l.top_m) << ','
         << io::fmt6(l.thickness_m) << ',' << io::fmt6(l.vs_mps) << '\n';
  }
  return os.str();
}

void write_profiles(const std::vector<LayeredProfile>& profiles, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << format_profiles(profiles);
}

}  // namespace sedvel::core
