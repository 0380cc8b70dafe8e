#include "sedvel/geostat/depth_residuals.hpp"

#include <cmath>

#include "sedvel/errors.hpp"
#include "sedvel/random.hpp"

namespace sedvel::geostat {

namespace {

void check(std::span<const double> depths, double sill, double range) {
  if (!(sill >= 0.0)) throw DomainError("sill must be >= 0");
  if (!(range > 0.0)) throw DomainError("range must be > 0");
  for (std::size_t i = 1; i < depths.size(); ++i)
    if (depths[i] < depths[i - 1]) throw DomainError("depths must be sorted ascending");
}

}  // namespace

std::vector<double> sample_depth_residuals(std::span<const double> depths_m, double sill_s,
                                           double range_r_m, double total_var,
                                           std::uint64_t seed) {
  check(depths_m, sill_s, range_r_m);
  if (total_var < sill_s) throw DomainError("total variance must be >= sill");
  std::vector<double> eps(depths_m.size(), 0.0);
  if (eps.empty()) return eps;

  Rng rng(seed);
  const double eta = std::sqrt(total_var - sill_s) * standard_normal(rng);
  const double sd = std::sqrt(sill_s);
  double w = sd * standard_normal(rng);
  eps[0] = eta + w;
  for (std::size_t i = 1; i < depths_m.size(); ++i) {
    const double rho = std::exp(-(depths_m[i] - depths_m[i - 1]) / range_r_m);
    w = rho * w + sd * std::sqrt(1.0 - rho * rho) * standard_normal(rng);
    eps[i] = eta + w;
  }
  return eps;
}

Eigen::MatrixXd depth_covariance(std::span<const double> depths_m, double sill_s,
                                 double range_r_m) {
  check(depths_m, sill_s, range_r_m);
  const auto n = static_cast<Eigen::Index>(depths_m.size());
  Eigen::MatrixXd C(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      C(i, j) = sill_s * std::exp(-std::abs(depths_m[i] - depths_m[j]) / range_r_m);
  return C;
}

}  // namespace sedvel::geostat
