#pragma once

#include "sedvel/core/coefficients.hpp"

namespace sedvel::core {

/// Logistic sigmoid, evaluated without overflow for any finite x.
double sigmoid(double x);

/// Smooth hinge ln(1 + exp(x)), overflow-safe. Behaves like x for large x,
/// which gives k its constant log-log slope r3 at high Vs30.
double softplus(double x);

/// Parameters of one median profile.
struct ProfileParams {
  double vs30 = 0.0;  ///< m/s
  double k = 0.0;     ///< slope parameter [1/m]
  double n = 1.0;     ///< curvature parameter (1 = linear)
  double vs0 = 0.0;   ///< surface velocity [m/s]
  double dBr = 0.0;   ///< slope adjustment already folded into k
};

/// (ln(vs30) - vs30_ref) / vs30_w.
double vs30_scaled(double vs30, const CoefficientSet& c);

/// n = 1 + s2 * S(vs30_scaled).
double n_of_vs30(double vs30, const CoefficientSet& c);

/// k = exp(r1 + r2 S(x) + r3 vs30_w H(x) + dBr), x = vs30_scaled.
double k_of_vs30(double vs30, const CoefficientSet& c, double dBr = 0.0);

/// Surface velocity that makes the 30 m time-averaged velocity of the median
/// profile equal to vs30. Continuous through n = 1.
double vs0_of(double vs30, double k, double n);

/// d ln(vs0) / d ln(k) at fixed vs30 and n.
double dln_vs0_dln_k(double k, double n);

/// Full parameter set for a site.
ProfileParams profile_params(double vs30, const CoefficientSet& c, double dBr = 0.0);

/// Median velocity at depth z [m].
double median_vs(double z, const ProfileParams& p);

/// d ln(median_vs(z)) / d ln(k), including the surface-velocity compensation
/// that keeps Vs30 fixed. Equals the sensitivity to the slope adjustment dBr.
double dln_vs_dln_k(double z, const ProfileParams& p);

}  // namespace sedvel::core
