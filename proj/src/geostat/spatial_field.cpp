#include "sedvel/geostat/spatial_field.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "sedvel/errors.hpp"
#include "sedvel/io/csv.hpp"

namespace sedvel::geostat {

void SpatialField::validate() const {
  if (!(hyper.ell_km > 0.0)) throw DataError("spatial field: ell must be > 0");
  if (!(hyper.omega >= 0.0)) throw DataError("spatial field: omega must be >= 0");
  for (const auto& p : points)
    if (!(p.dBr_sd >= 0.0) || !std::isfinite(p.dBr_mean))
      throw DataError("spatial field: point '" + p.id + "' has invalid mean/sd");
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if (distance_km(points[i].xy, points[j].xy) < 1e-3 &&
          points[i].dBr_mean != points[j].dBr_mean)
        throw DataError("spatial field: points '" + points[i].id + "' and '" + points[j].id +
                        "' coincide with different values");
}

SpatialField parse_spatial_field(const std::string& text, GpHyper hyper, const std::string& source) {
  const auto t = io::parse_csv(text, source);
  io::require_header(t, {"id", "lat", "lon", "dBr_mean", "dBr_sd"}, source);
  std::vector<core::Location> locs;
  std::vector<FieldPoint> pts;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const std::string ctx = source + ":" + std::to_string(t.line_numbers[r]);
    locs.push_back({io::parse_double(row[1], ctx), io::parse_double(row[2], ctx)});
    pts.push_back({row[0], {}, io::parse_double(row[3], ctx), io::parse_double(row[4], ctx)});
  }
  if (pts.empty()) throw DataError(source + ": no training points");
  SpatialField f;
  f.hyper = hyper;
  f.projection = LocalProjection::about_centroid(locs);
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i].xy = f.projection.project(locs[i]);
  f.points = std::move(pts);
  f.validate();
  return f;
}

SpatialField read_spatial_field(const std::filesystem::path& path, GpHyper hyper) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_spatial_field(ss.str(), hyper, path.string());
}

std::string format_spatial_field(const SpatialField& field) {
  std::ostringstream os;
  os << "id,lat,lon,dBr_mean,dBr_sd\n";
  for (const auto& p : field.points) {
    const auto loc = field.projection.unproject(p.xy);
    os << p.id << ',' << io::fmt_coord(loc.lat) << ',' << io::fmt_coord(loc.lon) << ','
       << io::fmt6(p.dBr_mean) << ',' << io::fmt6(p.dBr_sd) << '\n';
  }
  return os.str();
}

}  // namespace sedvel::geostat
