#pragma once

#include <filesystem>
#include <string>

#include "sedvel/calibrate/map_fit.hpp"

namespace sedvel::calibrate {

/// JSON document with the model kind, a "coefficients" object in the
/// coefficient-file layout, per-parameter estimates, per-profile dBr and the
/// convergence diagnostics. Non-finite numbers are written as null.
std::string fit_to_json(const FitResult& fit);
void write_fit(const FitResult& fit, const std::filesystem::path& path);

/// Fixed-width text table: one row per parameter with value and sd, fixed
/// parameters marked, followed by the diagnostics.
std::string format_fit_summary(const FitResult& fit);

}  // namespace sedvel::calibrate
