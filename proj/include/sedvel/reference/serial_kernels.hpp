#pragma once

// Single-threaded versions of the parallel kernels. Tests compare them with
// the OpenMP versions; the benchmark times both.

#include <span>
#include <vector>

#include "sedvel/calibrate/objective.hpp"
#include "sedvel/geostat/kriging.hpp"
#include "sedvel/geostat/semivariogram.hpp"
#include "sedvel/merge/grid_slice.hpp"

namespace sedvel::reference {

std::vector<geostat::Prediction> krige_serial(const geostat::Kriger& kriger,
                                              std::span<const geostat::PlanePoint> queries);

geostat::Semivariogram empirical_semivariogram_serial(std::span<const geostat::ResidualProfile> profiles,
                                                      std::span<const double> bin_edges);

double log_likelihood_serial(const calibrate::CalibrationData& data, const calibrate::Theta& theta,
                             calibrate::ModelKind model);

merge::Slice grid_slice_serial(const merge::Region& region, double depth_m, merge::SliceKind kind,
                               const merge::SliceInputs& in, const merge::SliceOptions& options = {});

}  // namespace sedvel::reference
