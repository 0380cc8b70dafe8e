#pragma once

#include <cstdint>
#include <vector>

#include "sedvel/core/coefficients.hpp"
#include "sedvel/core/profile.hpp"
#include "sedvel/geostat/spatial_field.hpp"

namespace sedvel::calibrate {

struct SynthLayout {
  std::size_t n_profiles = 200;
  double vs30_min = 150.0;  ///< m/s, log-uniform
  double vs30_max = 1000.0;
  double depth_min_m = 30.0;  ///< uniform; must be >= 30
  double depth_max_m = 100.0;
  double lat_min = 37.3, lat_max = 38.1;
  double lon_min = -122.5, lon_max = -121.7;
  /// About 20 layers per profile over 30-100 m.
  core::DiscretizationRule rule{1.0, 1.12, 6.0};
};

struct SynthDataset {
  std::vector<core::LayeredProfile> profiles;
  /// Generating values. Layer noise lowers the profile-derived Vs30 by
  /// roughly exp(-sigma^2 / 2), so fits meant to recover theta should use
  /// these (see Vs30Source::metadata).
  std::vector<double> vs30;
  /// True dBr at the profile locations (all zero without a spatial block).
  geostat::SpatialField truth;
};

/// Draws a dataset from the model. The spatial block of `theta` (if any)
/// drives the dBr field; layer ln-velocities get iid Normal(0, sigma) noise.
/// Deterministic for a given seed.
SynthDataset synth_dataset(const core::CoefficientSet& theta, const SynthLayout& layout,
                           std::uint64_t seed);

}  // namespace sedvel::calibrate
