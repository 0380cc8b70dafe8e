#include "sedvel/geostat/projection.hpp"

#include <cmath>
#include <numbers>

#include "sedvel/errors.hpp"

namespace sedvel::geostat {

namespace {
constexpr double kDeg = std::numbers::pi / 180.0;
}

LocalProjection LocalProjection::about_centroid(std::span<const core::Location> points) {
  if (points.empty()) throw DataError("cannot centre a projection on zero points");
  double lat = 0.0, lon = 0.0;
  for (const auto& p : points) {
    lat += p.lat;
    lon += p.lon;
  }
  const double n = static_cast<double>(points.size());
  return LocalProjection(lat / n, lon / n);
}

PlanePoint LocalProjection::project(const core::Location& loc) const {
  return {kEarthRadiusKm * (loc.lon - lon0_) * kDeg * std::cos(lat0_ * kDeg),
          kEarthRadiusKm * (loc.lat - lat0_) * kDeg};
}

core::Location LocalProjection::unproject(const PlanePoint& p) const {
  return {lat0_ + p.y_km / (kEarthRadiusKm * kDeg),
          lon0_ + p.x_km / (kEarthRadiusKm * kDeg * std::cos(lat0_ * kDeg))};
}

double distance_km(const PlanePoint& a, const PlanePoint& b) {
  return std::hypot(a.x_km - b.x_km, a.y_km - b.y_km);
}

}  // namespace sedvel::geostat
