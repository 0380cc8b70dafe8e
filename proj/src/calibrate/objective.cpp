#include "sedvel/calibrate/objective.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Cholesky>

#include "sedvel/core/scaling.hpp"
#include "sedvel/errors.hpp"
#include "sedvel/geostat/kriging.hpp"

namespace sedvel::calibrate {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

bool in_support(const core::CoefficientSet& c) {
  return c.vs30_w > 0.0 && c.s2 > 0.0 && c.sigma > 0.0 && c.r2 >= 0.0 && c.r3 >= 0.0 &&
         std::isfinite(c.vs30_ref) && std::isfinite(c.r1) && std::isfinite(c.r2) &&
         std::isfinite(c.r3) && std::isfinite(c.s2) && std::isfinite(c.sigma);
}

}  // namespace

const char* to_string(ModelKind m) { return m == ModelKind::stationary ? "stationary" : "spatial"; }

core::CoefficientSet Theta::effective(ModelKind model) const {
  core::CoefficientSet c = coeffs;
  if (model == ModelKind::spatial) {
    c.r1 += dr1;
    c.r2 += dr2;
    c.spatial = core::SpatialBlock{hyper.ell_km, hyper.omega};
  }
  return c;
}

double profile_log_likelihood(const CalibrationProfile& p, const core::CoefficientSet& c,
                              double dBr, double sigma) {
  if (!in_support(c) || !(sigma > 0.0) || !std::isfinite(dBr)) return kNegInf;
  core::ProfileParams pp;
  try {
    pp = core::profile_params(p.vs30, c, dBr);
  } catch (const DomainError&) {
    return kNegInf;  // k underflowed to zero
  }
  if (!std::isfinite(pp.k) || !(pp.k > 0.0) || !std::isfinite(pp.vs0)) return kNegInf;
  const double ln_vs0 = std::log(pp.vs0);
  const double inv_n = 1.0 / pp.n;
  double ss = 0.0;
  for (std::size_t j = 0; j < p.depth_m.size(); ++j) {
    const double z = p.depth_m[j];
    const double ln_med = z <= core::kZStar ? ln_vs0 : ln_vs0 + std::log1p(pp.k * (z - core::kZStar)) * inv_n;
    const double e = p.ln_vs[j] - ln_med;
    ss += e * e;
  }
  const double n = static_cast<double>(p.depth_m.size());
  return -0.5 * ss / (sigma * sigma) - n * (std::log(sigma) + kHalfLog2Pi);
}

double log_likelihood(const CalibrationData& data, const Theta& theta, ModelKind model) {
  const core::CoefficientSet c = theta.effective(model);
  if (!in_support(c)) return kNegInf;
  const bool spatial = model == ModelKind::spatial;
  if (spatial && theta.dBr.size() != data.profiles.size())
    throw DomainError("dBr vector length does not match the number of profiles");
  const auto np = static_cast<std::ptrdiff_t>(data.profiles.size());
  std::vector<double> part(data.profiles.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < np; ++i)
    part[i] = profile_log_likelihood(data.profiles[i], c, spatial ? theta.dBr[i] : 0.0, c.sigma);
  double sum = 0.0;
  for (double v : part) sum += v;
  return sum;
}

double log_prior(const Theta& theta, const PriorSpec& priors, ModelKind model,
                 const CalibrationData* data) {
  const auto& c = theta.coeffs;
  if (model == ModelKind::stationary) {
    return priors.vs30_ref.log_pdf(c.vs30_ref) + priors.vs30_w.log_pdf(c.vs30_w) +
           priors.s2.log_pdf(c.s2) + priors.r1.log_pdf(c.r1) + priors.r2.log_pdf(c.r2) +
           priors.r3.log_pdf(c.r3) + priors.sigma.log_pdf(c.sigma);
  }
  double lp = priors.dr1.log_pdf(theta.dr1) + priors.dr2.log_pdf(theta.dr2) +
              priors.sigma.log_pdf(c.sigma) + priors.ell_km.log_pdf(theta.hyper.ell_km) +
              priors.omega.log_pdf(theta.hyper.omega);
  if (!std::isfinite(lp)) return kNegInf;
  if (theta.dBr.empty()) return lp;
  if (data == nullptr || data->profiles.size() != theta.dBr.size())
    throw DomainError("GP prior on dBr needs the profile locations");
  if (!(theta.hyper.omega > 0.0)) {
    for (double d : theta.dBr)
      if (d != 0.0) return kNegInf;
    return lp;
  }
  std::vector<geostat::PlanePoint> xy;
  for (const auto& p : data->profiles) xy.push_back(p.xy);
  const Eigen::MatrixXd K = geostat::kernel_matrix(xy, theta.hyper.omega, theta.hyper.ell_km);
  Eigen::LLT<Eigen::MatrixXd> llt(K);
  if (llt.info() != Eigen::Success) return kNegInf;
  const Eigen::Map<const Eigen::VectorXd> d(theta.dBr.data(), static_cast<Eigen::Index>(theta.dBr.size()));
  const Eigen::VectorXd v = llt.matrixL().solve(d);
  const double logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  const double n = static_cast<double>(theta.dBr.size());
  return lp - 0.5 * v.squaredNorm() - 0.5 * logdet - n * kHalfLog2Pi;
}

double residual_sd(const CalibrationData& data, const Theta& theta, ModelKind model) {
  const core::CoefficientSet c = theta.effective(model);
  double ss = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < data.profiles.size(); ++i) {
    const auto& p = data.profiles[i];
    const double dBr = model == ModelKind::spatial ? theta.dBr.at(i) : 0.0;
    const core::ProfileParams pp = core::profile_params(p.vs30, c, dBr);
    for (std::size_t j = 0; j < p.depth_m.size(); ++j) {
      const double e = p.ln_vs[j] - std::log(core::median_vs(p.depth_m[j], pp));
      ss += e * e;
      ++n;
    }
  }
  return n ? std::sqrt(ss / static_cast<double>(n)) : 0.0;
}

}  // namespace sedvel::calibrate
