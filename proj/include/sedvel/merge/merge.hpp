#pragma once

#include <span>
#include <vector>

#include "sedvel/core/profile.hpp"
#include "sedvel/core/scaling.hpp"

namespace sedvel::merge {

/// Velocity at which the sedimentary model hands over to the background.
inline constexpr double kTransitionVs = 1000.0;

/// Sorted union of both profiles' interfaces (surface and bottoms included),
/// limited to `max_depth`. Interfaces closer than 1e-9 relative are merged.
std::vector<double> union_interfaces(const core::LayeredProfile& a, const core::LayeredProfile& b,
                                     double max_depth_m);

/// Same column sampled on new interfaces (first must be 0). Velocity of each
/// new layer is the velocity at its mid-depth.
core::LayeredProfile resample(const core::LayeredProfile& p, std::span<const double> interfaces);

/// Splices the sedimentary profile onto the background column.
///
/// Both are resampled onto the union of their interfaces down to the
/// background's depth, which must reach at least the SVM's depth. The
/// transition layer is the first SVM layer where max(svm, background)
/// reaches kTransitionVs. Above it the output is max(svm, background); at it
/// max(background, kTransitionVs); below it the background, held at or above
/// that floor until the background itself reaches it. When the SVM ends
/// before the transition the floor is the last merged velocity. Idempotent
/// for a fixed background.
core::LayeredProfile merge_profile(const core::LayeredProfile& svm,
                                   const core::LayeredProfile& background);

/// Depth where the median profile reaches vs_limit; 0 when the surface
/// velocity already exceeds it.
double z_vs_threshold(const core::ProfileParams& params, double vs_limit);

}  // namespace sedvel::merge
