#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sedvel/calibrate/dataset.hpp"
#include "sedvel/calibrate/objective.hpp"
#include "sedvel/calibrate/optimizer.hpp"
#include "sedvel/calibrate/priors.hpp"
#include "sedvel/core/coefficients.hpp"
#include "sedvel/geostat/spatial_field.hpp"

namespace sedvel::calibrate {

struct FitOptions {
  int max_iter = 500;
  /// Starting points for the stationary fit: the initial value, then
  /// restarts - 1 prior draws.
  int restarts = 5;
  std::uint64_t seed = 0;
  double grad_tol = 1e-4;
  std::size_t min_profiles = 10;
  /// Evaluation budget of the hyperparameter search (spatial model).
  int hyper_max_evals = 80;
};

struct ParamEstimate {
  std::string name;
  double value = 0.0;
  double sd = 0.0;
  bool fixed = false;
};

struct FitResult {
  ModelKind model = ModelKind::stationary;
  /// Fitted coefficients; for the spatial model r1, r2 include the
  /// adjustments and the spatial block holds the hyperparameters.
  core::CoefficientSet coeffs;
  double dr1 = 0.0;
  double dr2 = 0.0;
  std::vector<std::string> profile_ids;
  std::vector<double> dBr;
  std::vector<double> dBr_sd;
  std::vector<ParamEstimate> params;
  double neg_log_posterior = 0.0;
  int iterations = 0;
  double grad_norm = 0.0;  ///< scaled, see scaled_gradient_norm
  OptimStatus status = OptimStatus::not_converged;
  int best_restart = 0;
  double residual_sd = 0.0;
  /// Posterior dBr at the profile locations (spatial fits with locations).
  std::optional<geostat::SpatialField> field;

  const ParamEstimate& param(const std::string& name) const;
};

/// Penalized maximum a posteriori fit.
///
/// Stationary: BFGS over (vs30_ref, ln vs30_w, r1, ln r2, ln r3, ln s2,
/// ln sigma) with central-difference gradients, multistart, and sds from the
/// inverse Hessian of the transformed objective.
///
/// Spatial: vs30_ref, vs30_w, r3, s2 and the base r1, r2 are held at the
/// values in `init`; sigma and the spatial block of `init` (if any) are
/// starting values. (dr1, dr2, ln sigma, dBr) are fitted jointly by BFGS
/// under the GP prior at given (ell, omega); the hyperparameters are chosen by
/// minimizing the Laplace approximation of their negative log marginal
/// posterior (Nelder-Mead in log space), which is what neg_log_posterior
/// reports for this model. dBr_sd comes from the inverse Hessian at the
/// optimum.
FitResult map_fit(const CalibrationData& data, const PriorSpec& priors, ModelKind model,
                  const core::CoefficientSet& init, const FitOptions& options = {});

/// Unconstrained stationary vector <-> coefficients. Non-stationary fields of
/// `like` are carried through.
Eigen::VectorXd to_unconstrained(const core::CoefficientSet& c);
core::CoefficientSet from_unconstrained(const Eigen::VectorXd& u, const core::CoefficientSet& like);

/// Negative log posterior of the stationary model in unconstrained space
/// (Jacobian included).
double stationary_objective(const CalibrationData& data, const PriorSpec& priors,
                            const Eigen::VectorXd& u, const core::CoefficientSet& like);

}  // namespace sedvel::calibrate
