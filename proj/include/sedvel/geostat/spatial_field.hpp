#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sedvel/geostat/projection.hpp"

namespace sedvel::geostat {

struct FieldPoint {
  std::string id;
  PlanePoint xy;
  double dBr_mean = 0.0;
  double dBr_sd = 0.0;
};

struct GpHyper {
  double omega = 0.0;  ///< marginal sd
  double ell_km = 1.0;  ///< correlation length
};

/// Training data for the slope-adjustment Gaussian process.
struct SpatialField {
  std::vector<FieldPoint> points;
  GpHyper hyper;
  LocalProjection projection;  ///< maps lat/lon queries into the points' plane

  /// Throws DataError on coincident points (< 1 m) with different means,
  /// negative sds, or invalid hyperparameters.
  void validate() const;
};

/// CSV id,lat,lon,dBr_mean,dBr_sd. Points are projected about their centroid.
SpatialField read_spatial_field(const std::filesystem::path& path, GpHyper hyper);
SpatialField parse_spatial_field(const std::string& text, GpHyper hyper,
                                 const std::string& source = "<memory>");
std::string format_spatial_field(const SpatialField& field);

}  // namespace sedvel::geostat
