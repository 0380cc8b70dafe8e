#pragma once

#include <array>
#include <string>
#include <vector>

#include "sedvel/site/intensity.hpp"

namespace sedvel::site {

enum class Im { pga, pgv, pgd, arias, d5_95, fas, psa };
inline constexpr std::size_t kImCount = 7;
inline constexpr std::array<Im, kImCount> kAllIms = {Im::pga, Im::pgv,   Im::pgd, Im::arias,
                                                     Im::d5_95, Im::fas, Im::psa};
const char* to_string(Im im);

struct Band {
  std::string name;
  double f_lo = 0.0;  ///< Hz, inclusive
  double f_hi = 0.0;  ///< Hz, exclusive except for the top band
};

/// low [0.01, fp), mid [fp, 2 fp), high [2 fp, 10] Hz. Throws DomainError
/// unless 0.01 < fp < 5 so that all three bands are non-empty.
std::array<Band, 3> fp_bands(double fp);

/// Index into fp_bands of the band containing f, or -1 outside [0.01, 10].
int band_index(double f, double fp);

struct GofScores {
  std::array<double, kImCount> score{};
  std::array<bool, kImCount> valid{};
  double aggregate = 0.0;  ///< mean over valid IMs
  std::vector<std::string> diagnostics;
};

/// ln(model / ref) per scalar IM; for FAS and PSA the mean ln-ratio over the
/// grid points whose frequency lies in [f_lo, f_hi]. IMs with a zero
/// reference (or model) value, or no grid points in the band, are excluded
/// with a diagnostic. Positive scores mean the model overestimates.
GofScores gof_score(const ImSet& ref, const ImSet& model, double f_lo, double f_hi);

}  // namespace sedvel::site
