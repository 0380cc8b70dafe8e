#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "sedvel/core/profile.hpp"
#include "sedvel/geostat/projection.hpp"

namespace sedvel::calibrate {

/// One profile prepared for regression: observation depths are layer
/// mid-depths, observations are ln(vs).
struct CalibrationProfile {
  std::string id;
  double vs30 = 0.0;
  std::vector<double> depth_m;
  std::vector<double> ln_vs;
  geostat::PlanePoint xy;
};

struct CalibrationData {
  std::vector<CalibrationProfile> profiles;
  geostat::LocalProjection projection;
  bool has_locations = false;

  std::size_t observations() const;
};

enum class Vs30Source {
  profile,   ///< top 30 m of the profile; metadata only for shallower profiles
  metadata,  ///< metadata when present, otherwise the profile
};

/// Profiles shallower than 30 m without metadata are rejected.
CalibrationData prepare_dataset(std::span<const core::LayeredProfile> profiles,
                                const std::map<std::string, double>& vs30_metadata = {},
                                Vs30Source source = Vs30Source::profile);

}  // namespace sedvel::calibrate
