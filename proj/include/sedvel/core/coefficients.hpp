#pragma once

#include <filesystem>
#include <optional>

namespace sedvel::core {

/// Depth above which the median profile is held at its surface velocity [m].
inline constexpr double kZStar = 2.5;

struct SpatialBlock {
  double ell_km = 0.0;  ///< correlation length of the slope adjustment
  double omega = 0.0;   ///< marginal sd of the slope adjustment
};

struct DepthBlock {
  double range_r_m = 0.0;  ///< e-folding length of the along-depth correlation
  double sill_s = 0.0;     ///< within-profile semivariance (ln-units squared)
};

/// Fitted scalars of the median velocity model. For a spatially varying model
/// r1 and r2 hold the adjusted values (stationary value plus adjustment).
struct CoefficientSet {
  double vs30_ref = 0.0;  ///< ln(m/s) midpoint of the Vs30 transition
  double vs30_w = 1.0;    ///< width of the transition in ln-units
  double r1 = 0.0;
  double r2 = 0.0;
  double r3 = 0.0;
  double s2 = 1.0;
  double sigma = 1.0;  ///< ln-space residual standard deviation
  double z_star = kZStar;
  std::optional<SpatialBlock> spatial;
  std::optional<DepthBlock> depth;

  /// Throws DomainError when an invariant is violated.
  void validate() const;
};

enum class Summary { median, mean };

/// Stationary-model posterior summary with the stationary along-depth
/// semivariogram parameters attached.
CoefficientSet stationary_preset(Summary summary = Summary::median);

/// Spatially varying model posterior summary (fixed values for vs30_ref,
/// vs30_w, r3, s2) with its along-depth semivariogram parameters.
CoefficientSet spatial_preset(Summary summary = Summary::median);

/// Flat JSON document with keys vs30_ref, vs30_w, r1, r2, r3, s2, sigma,
/// z_star, ell_km, omega, range_r_m, sill_s. Absent optional blocks are null.
CoefficientSet load_coefficients(const std::filesystem::path& path);
void save_coefficients(const CoefficientSet& c, const std::filesystem::path& path);
std::string coefficients_to_json(const CoefficientSet& c);
CoefficientSet coefficients_from_json(const std::string& text);

}  // namespace sedvel::core
