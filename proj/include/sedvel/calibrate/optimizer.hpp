#pragma once

#include <functional>
#include <string>

#include <Eigen/Core>

namespace sedvel::calibrate {

using Objective = std::function<double(const Eigen::VectorXd&)>;
using GradientFn = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;

enum class OptimStatus { converged, not_converged, line_search_failed };

const char* to_string(OptimStatus s);

struct MinimizeOptions {
  int max_iter = 500;
  /// Convergence when max_i |g_i| max(|x_i|, 1) / max(|f|, 1) falls below this.
  double grad_tol = 1e-4;
};

struct MinimizeResult {
  Eigen::VectorXd x;
  double f = 0.0;
  Eigen::VectorXd grad;
  int iterations = 0;
  int evaluations = 0;
  double scaled_grad = 0.0;
  OptimStatus status = OptimStatus::not_converged;
};

/// max_i |g_i| max(|x_i|, 1) / max(|f|, 1).
double scaled_gradient_norm(const Eigen::VectorXd& x, double f, const Eigen::VectorXd& g);

/// Central differences with step rel_step * max(|x_i|, 1).
Eigen::VectorXd central_gradient(const Objective& f, const Eigen::VectorXd& x,
                                 double rel_step = 1e-6);

/// BFGS with Armijo backtracking. Infinite objective values are treated as
/// rejected trial points. Deterministic.
MinimizeResult bfgs(const Objective& f, const GradientFn& grad, Eigen::VectorXd x0,
                    const MinimizeOptions& opts);

/// Symmetrized Hessian from central differences of the gradient.
Eigen::MatrixXd hessian_from_gradient(const GradientFn& grad, const Eigen::VectorXd& x,
                                      double rel_step = 1e-4);

/// Hessian from second differences of the objective (small problems).
Eigen::MatrixXd hessian_from_objective(const Objective& f, const Eigen::VectorXd& x,
                                       double rel_step = 1e-4);

struct NelderMeadOptions {
  int max_evals = 200;
  double x_tol = 1e-4;  ///< simplex diameter (infinity norm)
  double f_tol = 1e-7;  ///< spread of simplex values
  double initial_step = 0.5;
};

/// Derivative-free simplex minimization for low-dimensional, slightly noisy
/// objectives.
MinimizeResult nelder_mead(const Objective& f, Eigen::VectorXd x0, const NelderMeadOptions& opts);

}  // namespace sedvel::calibrate
