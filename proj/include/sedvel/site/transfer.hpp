#pragma once

#include <span>
#include <vector>

#include "sedvel/core/profile.hpp"
#include "sedvel/site/spectral.hpp"

namespace sedvel::site {

/// Density proxy rho = base + slope * vs [kg/m^3], clamped to [min, max].
struct DensityModel {
  double base = 1600.0;
  double slope = 0.1;
  double min = 1600.0;
  double max = 2600.0;
  double operator()(double vs) const;
};

struct HalfSpace {
  double vs = 0.0;       ///< m/s
  double density = 0.0;  ///< kg/m^3
};

/// Column with per-layer density and a shared damping ratio.
struct SoilColumn {
  std::vector<double> thickness_m;
  std::vector<double> vs;
  std::vector<double> density;
  HalfSpace halfspace;
  double damping = 0.02;
};

struct ColumnOptions {
  DensityModel density;
  double damping = 0.02;
  /// Half-space vs is max(bottom-layer vs, this).
  double halfspace_min_vs = 1000.0;
};

SoilColumn make_column(const core::LayeredProfile& profile, const ColumnOptions& options = {});

/// Surface motion over outcrop motion for vertically incident SH waves,
/// by the layer-matrix recursion with complex velocity vs sqrt(1 + 2 i xi)
/// (half-space included). Throws DomainError on non-positive thickness,
/// velocity or density, damping outside [0, 0.2] or unsorted frequencies.
Spectrum transfer_function(const SoilColumn& column, std::span<const double> freqs);

}  // namespace sedvel::site
