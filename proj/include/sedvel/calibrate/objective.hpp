#pragma once

#include <vector>

#include "sedvel/calibrate/dataset.hpp"
#include "sedvel/calibrate/priors.hpp"
#include "sedvel/core/coefficients.hpp"
#include "sedvel/geostat/spatial_field.hpp"

namespace sedvel::calibrate {

enum class ModelKind { stationary, spatial };

const char* to_string(ModelKind m);

/// Model parameters. `coeffs` holds the stationary scaling (r1, r2 before
/// adjustment); the spatial model adds (dr1, dr2), one dBr per profile and
/// the GP hyperparameters.
struct Theta {
  core::CoefficientSet coeffs;
  double dr1 = 0.0;
  double dr2 = 0.0;
  std::vector<double> dBr;
  geostat::GpHyper hyper{0.0, 1.0};

  /// Coefficients with r1, r2 adjusted and the spatial block filled in.
  core::CoefficientSet effective(ModelKind model) const;
};

/// Gaussian ln-likelihood of one profile; -inf when the coefficients are out
/// of support.
double profile_log_likelihood(const CalibrationProfile& p, const core::CoefficientSet& c,
                              double dBr, double sigma);

/// Sum over profiles of the per-layer Normal log-density of
/// ln(vs) - ln(median). Parallel over profiles, reduced in profile order.
double log_likelihood(const CalibrationData& data, const Theta& theta, ModelKind model);

/// Sum of prior log-densities of the model's active parameters, including
/// the zero-mean GP density of dBr for the spatial model. -inf outside
/// support.
double log_prior(const Theta& theta, const PriorSpec& priors, ModelKind model,
                 const CalibrationData* data = nullptr);

/// Pooled ln-residual standard deviation sqrt(mean(eps^2)).
double residual_sd(const CalibrationData& data, const Theta& theta, ModelKind model);

}  // namespace sedvel::calibrate
