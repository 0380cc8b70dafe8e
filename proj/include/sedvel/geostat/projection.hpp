#pragma once

#include <span>

#include "sedvel/core/profile.hpp"

namespace sedvel::geostat {

inline constexpr double kEarthRadiusKm = 6371.0;

struct PlanePoint {
  double x_km = 0.0;  ///< east
  double y_km = 0.0;  ///< north
};

/// Equirectangular projection about a reference point; adequate for extents
/// of a few hundred kilometres.
class LocalProjection {
 public:
  LocalProjection() = default;
  LocalProjection(double lat0, double lon0) : lat0_(lat0), lon0_(lon0) {}

  /// Projection centred on the mean latitude/longitude of the points.
  static LocalProjection about_centroid(std::span<const core::Location> points);

  PlanePoint project(const core::Location& loc) const;
  core::Location unproject(const PlanePoint& p) const;
  double lat0() const { return lat0_; }
  double lon0() const { return lon0_; }

 private:
  double lat0_ = 0.0;
  double lon0_ = 0.0;
};

double distance_km(const PlanePoint& a, const PlanePoint& b);

}  // namespace sedvel::geostat
