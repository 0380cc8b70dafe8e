#pragma once

#include <span>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "sedvel/geostat/spatial_field.hpp"

namespace sedvel::geostat {

/// omega^2 exp(-d / ell).
double spatial_kernel(double d_km, double omega, double ell_km);

struct Prediction {
  double mean = 0.0;
  double sd = 0.0;
};

/// Zero-mean GP regression of the slope adjustment with heteroscedastic
/// observation noise dBr_sd^2. The covariance is factorized once; prediction
/// is read-only and safe to call concurrently.
class Kriger {
 public:
  explicit Kriger(SpatialField field);

  Prediction predict(const PlanePoint& q) const;

  /// Parallel over query points (OpenMP); results are independent of the
  /// thread count.
  std::vector<Prediction> predict(std::span<const PlanePoint> queries) const;

  const SpatialField& field() const { return field_; }
  /// Diagonal jitter that was needed for a successful factorization (0 when
  /// the covariance was positive definite as given).
  double jitter() const { return jitter_; }

 private:
  SpatialField field_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd alpha_;
  double jitter_ = 0.0;
};

std::vector<Prediction> krige_dBr(const SpatialField& field, std::span<const PlanePoint> queries);

/// Covariance matrix of the field's training points (no noise term).
Eigen::MatrixXd kernel_matrix(std::span<const PlanePoint> pts, double omega, double ell_km);

}  // namespace sedvel::geostat
