#include "sedvel/geostat/kriging.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "sedvel/errors.hpp"

namespace sedvel::geostat {

double spatial_kernel(double d_km, double omega, double ell_km) {
  if (!(d_km >= 0.0)) throw DomainError("kernel distance must be >= 0");
  if (!(ell_km > 0.0)) throw DomainError("ell must be > 0");
  if (!(omega >= 0.0)) throw DomainError("omega must be >= 0");
  return omega * omega * std::exp(-d_km / ell_km);
}

Eigen::MatrixXd kernel_matrix(std::span<const PlanePoint> pts, double omega, double ell_km) {
  const auto n = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXd K(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    K(i, i) = omega * omega;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double v = spatial_kernel(distance_km(pts[i], pts[j]), omega, ell_km);
      K(i, j) = v;
      K(j, i) = v;
    }
  }
  return K;
}

Kriger::Kriger(SpatialField field) : field_(std::move(field)) {
  field_.validate();
  const auto& pts = field_.points;
  const double omega = field_.hyper.omega;
  if (pts.empty() || omega == 0.0) return;

  std::vector<PlanePoint> xy;
  xy.reserve(pts.size());
  for (const auto& p : pts) xy.push_back(p.xy);
  Eigen::MatrixXd K = kernel_matrix(xy, omega, field_.hyper.ell_km);
  Eigen::VectorXd y(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    K(i, i) += pts[i].dBr_sd * pts[i].dBr_sd;
    y(i) = pts[i].dBr_mean;
  }

  // Jitter only when needed: a fixed diagonal offset would bias noise-free
  // interpolation at the training points.
  llt_.compute(K);
  double jitter = 1e-8;
  while (llt_.info() != Eigen::Success) {
    if (jitter > 1e-2 * omega * omega) {
      std::ostringstream msg;
      msg << "kriging covariance is singular for " << pts.size()
          << " points (coincident noise-free points?); jitter up to " << jitter / 10
          << " did not help";
      throw NumericalError(msg.str());
    }
    jitter_ = jitter;
    llt_.compute(K + jitter * Eigen::MatrixXd::Identity(K.rows(), K.cols()));
    jitter *= 10.0;
  }
  alpha_ = llt_.solve(y);
}

Prediction Kriger::predict(const PlanePoint& q) const {
  const double omega = field_.hyper.omega;
  const auto& pts = field_.points;
  if (pts.empty() || omega == 0.0) return {0.0, omega};
  const auto n = static_cast<Eigen::Index>(pts.size());
  Eigen::VectorXd ks(n);
  for (Eigen::Index i = 0; i < n; ++i)
    ks(i) = spatial_kernel(distance_km(q, pts[i].xy), omega, field_.hyper.ell_km);
  const double mean = ks.dot(alpha_);
  const Eigen::VectorXd v = llt_.matrixL().solve(ks);
  const double prior = omega * omega;
  double var = prior - v.squaredNorm();
  // The subtraction cancels to roundoff at noise-free training points.
  const double floor = 64.0 * static_cast<double>(n) * std::numeric_limits<double>::epsilon() * prior;
  if (var < floor) var = 0.0;
  return {mean, std::sqrt(var)};
}

std::vector<Prediction> Kriger::predict(std::span<const PlanePoint> queries) const {
  std::vector<Prediction> out(queries.size());
  const auto n = static_cast<std::ptrdiff_t>(queries.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = predict(queries[i]);
  return out;
}

std::vector<Prediction> krige_dBr(const SpatialField& field, std::span<const PlanePoint> queries) {
  return Kriger(field).predict(queries);
}

}  // namespace sedvel::geostat
