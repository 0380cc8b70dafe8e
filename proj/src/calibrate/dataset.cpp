#include "sedvel/calibrate/dataset.hpp"

#include <cmath>

#include "sedvel/errors.hpp"

namespace sedvel::calibrate {

std::size_t CalibrationData::observations() const {
  std::size_t n = 0;
  for (const auto& p : profiles) n += p.depth_m.size();
  return n;
}

CalibrationData prepare_dataset(std::span<const core::LayeredProfile> profiles,
                                const std::map<std::string, double>& vs30_metadata,
                                Vs30Source source) {
  CalibrationData data;
  std::vector<core::Location> locs;
  bool all_located = !profiles.empty();
  for (const auto& p : profiles) {
    CalibrationProfile cp;
    cp.id = p.id();
    const auto meta = vs30_metadata.find(p.id());
    const bool has_meta = meta != vs30_metadata.end();
    if (has_meta && (source == Vs30Source::metadata || p.depth_m() < 30.0)) {
      if (!(meta->second > 0.0)) throw DataError("non-positive Vs30 metadata for '" + p.id() + "'");
      cp.vs30 = meta->second;
    } else if (p.depth_m() >= 30.0) {
      cp.vs30 = core::time_averaged_vs(p, 30.0);
    } else {
      throw DataError("profile '" + p.id() +
                      "' is shallower than 30 m and has no Vs30 metadata");
    }
    for (const auto& l : p.layers()) {
      cp.depth_m.push_back(l.mid_m());
      cp.ln_vs.push_back(std::log(l.vs_mps));
    }
    if (p.location()) locs.push_back(*p.location());
    else all_located = false;
    data.profiles.push_back(std::move(cp));
  }
  data.has_locations = all_located;
  if (all_located) {
    data.projection = geostat::LocalProjection::about_centroid(locs);
    for (std::size_t i = 0; i < locs.size(); ++i)
      data.profiles[i].xy = data.projection.project(locs[i]);
  }
  return data;
}

}  // namespace sedvel::calibrate
