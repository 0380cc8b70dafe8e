#include "sedvel/calibrate/synth.hpp"

#include <cmath>
#include <string>

#include <Eigen/Cholesky>

#include "sedvel/errors.hpp"
#include "sedvel/geostat/kriging.hpp"
#include "sedvel/geostat/projection.hpp"
#include "sedvel/random.hpp"

namespace sedvel::calibrate {

namespace {

void validate(const SynthLayout& l) {
  if (l.n_profiles == 0) throw DomainError("synthetic layout needs at least one profile");
  if (!(l.vs30_min > 0.0) || !(l.vs30_max >= l.vs30_min))
    throw DomainError("synthetic vs30 range must satisfy 0 < min <= max");
  if (!(l.depth_min_m >= 30.0) || !(l.depth_max_m >= l.depth_min_m))
    throw DomainError("synthetic depth range must satisfy 30 <= min <= max");
  if (!(l.lat_max > l.lat_min) || !(l.lon_max > l.lon_min))
    throw DomainError("synthetic spatial extent is degenerate");
}

std::vector<double> draw_gp(std::span<const geostat::PlanePoint> xy, const core::SpatialBlock& s,
                            std::uint64_t seed) {
  std::vector<double> out(xy.size(), 0.0);
  if (!(s.omega > 0.0)) return out;
  const auto n = static_cast<Eigen::Index>(xy.size());
  Eigen::MatrixXd K = geostat::kernel_matrix(xy, s.omega, s.ell_km);
  Eigen::LLT<Eigen::MatrixXd> llt(K);
  for (double jitter = 1e-10; llt.info() != Eigen::Success; jitter *= 10.0) {
    if (jitter > 1e-4) throw NumericalError("GP covariance of synthetic locations is singular");
    llt.compute(K + (jitter * s.omega * s.omega) * Eigen::MatrixXd::Identity(n, n));
  }
  Rng rng = make_rng(seed, "dBr");
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z(i) = standard_normal(rng);
  const Eigen::VectorXd d = llt.matrixL() * z;
  for (Eigen::Index i = 0; i < n; ++i) out[i] = d(i);
  return out;
}

}  // namespace

SynthDataset synth_dataset(const core::CoefficientSet& theta, const SynthLayout& layout,
                           std::uint64_t seed) {
  validate(layout);
  if (!(theta.sigma >= 0.0)) throw DomainError("synthetic sigma must be >= 0");
  // sigma = 0 gives noise-free profiles, which the coefficient invariants exclude
  core::CoefficientSet check = theta;
  check.sigma = 1.0;
  check.validate();
  const std::size_t n = layout.n_profiles;
  SynthDataset out;
  out.vs30.resize(n);

  std::vector<core::Location> locs(n);
  std::vector<double> depth(n);
  const double lv_lo = std::log(layout.vs30_min), lv_hi = std::log(layout.vs30_max);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng = make_rng(seed, "site", i);
    out.vs30[i] = std::exp(lv_lo + (lv_hi - lv_lo) * uniform01(rng));
    locs[i].lat = layout.lat_min + (layout.lat_max - layout.lat_min) * uniform01(rng);
    locs[i].lon = layout.lon_min + (layout.lon_max - layout.lon_min) * uniform01(rng);
    depth[i] = layout.depth_min_m + (layout.depth_max_m - layout.depth_min_m) * uniform01(rng);
  }

  const auto proj = geostat::LocalProjection::about_centroid(locs);
  std::vector<geostat::PlanePoint> xy;
  for (const auto& l : locs) xy.push_back(proj.project(l));
  const core::SpatialBlock sb = theta.spatial.value_or(core::SpatialBlock{1.0, 0.0});
  const std::vector<double> dBr = draw_gp(xy, sb, seed);

  out.truth.hyper = {sb.omega, sb.ell_km};
  out.truth.projection = proj;
  const int width = static_cast<int>(std::to_string(n).size());
  for (std::size_t i = 0; i < n; ++i) {
    std::string num = std::to_string(i + 1);
    const std::string id = "S" + std::string(width - num.size(), '0') + num;
    const core::ProfileParams pp = core::profile_params(out.vs30[i], theta, dBr[i]);
    core::LayeredProfile median = core::discretize(pp, depth[i], layout.rule);

    Rng rng = make_rng(seed, "noise", i);
    std::vector<double> vs;
    for (const auto& layer : median.layers())
      vs.push_back(layer.vs_mps * std::exp(theta.sigma * standard_normal(rng)));
    core::LayeredProfile noisy = median.with_velocities(vs, core::Provenance::measured);
    noisy.set_id(id);
    noisy.set_location(locs[i]);
    out.profiles.push_back(std::move(noisy));
    out.truth.points.push_back({id, xy[i], dBr[i], 0.0});
  }
  return out;
}

}  // namespace sedvel::calibrate
