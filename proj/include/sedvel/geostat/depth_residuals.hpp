#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace sedvel::geostat {

/// Along-depth ln-residual realization eps(z) = eta + w(z): eta is a
/// per-profile constant with variance total_var - sill_s, w a zero-mean
/// Gaussian process with covariance sill_s exp(-|dz| / range_r).
///
/// The exponential covariance is Markov in one dimension, so w is generated
/// by the exact first-order recursion (the Cholesky factor of the covariance
/// in banded form) in O(n). Deterministic for a fixed seed.
std::vector<double> sample_depth_residuals(std::span<const double> depths_m, double sill_s,
                                           double range_r_m, double total_var,
                                           std::uint64_t seed);

/// Dense covariance of w at the given depths.
Eigen::MatrixXd depth_covariance(std::span<const double> depths_m, double sill_s,
                                 double range_r_m);

}  // namespace sedvel::geostat
