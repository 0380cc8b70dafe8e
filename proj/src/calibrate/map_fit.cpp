#include "sedvel/calibrate/map_fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "sedvel/core/scaling.hpp"
#include "sedvel/errors.hpp"
#include "sedvel/geostat/kriging.hpp"
#include "sedvel/random.hpp"

namespace sedvel::calibrate {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::array<const char*, 7> kStationaryNames = {"vs30_ref", "vs30_w", "r1", "r2",
                                                         "r3",       "s2",     "sigma"};
constexpr std::array<bool, 7> kLogged = {false, true, false, true, true, true, true};

// Hyperparameter search box in ln(km) and ln(omega).
constexpr double kLnEllMin = -4.6, kLnEllMax = 6.9;
constexpr double kLnOmegaMin = -9.2, kLnOmegaMax = 1.6;

core::CoefficientSet draw_prior(const PriorSpec& p, Rng& rng, const core::CoefficientSet& like) {
  core::CoefficientSet c = like;
  c.vs30_ref = p.vs30_ref.sample(rng);
  c.vs30_w = p.vs30_w.sample(rng);
  c.r1 = p.r1.sample(rng);
  c.r2 = p.r2.sample(rng);
  c.r3 = p.r3.sample(rng);
  c.s2 = p.s2.sample(rng);
  c.sigma = p.sigma.sample(rng);
  return c;
}

double sd_from_cov(double v) { return v >= 0.0 ? std::sqrt(v) : kInf; }

Eigen::MatrixXd inverse_spd(const Eigen::MatrixXd& H) {
  const Eigen::Index n = H.rows();
  Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
    return Eigen::MatrixXd::Constant(n, n, -1.0);
  return ldlt.solve(Eigen::MatrixXd::Identity(n, n));
}

void check_data(const CalibrationData& data, const FitOptions& opts) {
  if (data.profiles.size() < opts.min_profiles)
    throw DataError("calibration needs at least " + std::to_string(opts.min_profiles) +
                    " profiles, got " + std::to_string(data.profiles.size()));
}

FitResult fit_stationary(const CalibrationData& data, const PriorSpec& priors,
                         const core::CoefficientSet& init, const FitOptions& opts) {
  const Objective f = [&](const Eigen::VectorXd& u) {
    return stationary_objective(data, priors, u, init);
  };
  const GradientFn g = [&](const Eigen::VectorXd& u, Eigen::VectorXd& out) {
    out = central_gradient(f, u, 1e-6);
  };
  const MinimizeOptions mo{opts.max_iter, opts.grad_tol};

  MinimizeResult best;
  int best_r = -1;
  const int restarts = std::max(1, opts.restarts);
  for (int r = 0; r < restarts; ++r) {
    core::CoefficientSet start = init;
    if (r > 0) {
      Rng rng = make_rng(opts.seed, "restart", static_cast<std::uint64_t>(r));
      start = draw_prior(priors, rng, init);
    }
    MinimizeResult res = bfgs(f, g, to_unconstrained(start), mo);
    if (best_r < 0 || res.f < best.f - 1e-9) {
      best = std::move(res);
      best_r = r;
    }
  }

  FitResult out;
  out.model = ModelKind::stationary;
  out.coeffs = from_unconstrained(best.x, init);
  out.coeffs.spatial.reset();
  out.neg_log_posterior = best.f;
  out.iterations = best.iterations;
  out.grad_norm = best.scaled_grad;
  out.status = best.status;
  out.best_restart = best_r;
  for (const auto& p : data.profiles) out.profile_ids.push_back(p.id);

  Eigen::VectorXd sd_u = Eigen::VectorXd::Constant(7, kInf);
  if (std::isfinite(best.f)) {
    const Eigen::MatrixXd cov = inverse_spd(hessian_from_objective(f, best.x, 1e-4));
    for (int i = 0; i < 7; ++i) sd_u(i) = sd_from_cov(cov(i, i));
  }
  for (int i = 0; i < 7; ++i) {
    const double value = kLogged[i] ? std::exp(best.x(i)) : best.x(i);
    out.params.push_back({kStationaryNames[i], value, kLogged[i] ? value * sd_u(i) : sd_u(i), false});
  }
  Theta th;
  th.coeffs = out.coeffs;
  out.residual_sd = std::isfinite(best.f) ? residual_sd(data, th, ModelKind::stationary) : kInf;
  return out;
}

// Joint (dr1, dr2, ln sigma, dBr) problem at fixed hyperparameters.
class SpatialProblem {
 public:
  SpatialProblem(const CalibrationData& data, const PriorSpec& priors, core::CoefficientSet base)
      : data_(data), priors_(priors), base_(std::move(base)), m_(data.profiles.size()) {
    const auto m = static_cast<Eigen::Index>(m_);
    dist_.resize(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j)
        dist_(i, j) = geostat::distance_km(data.profiles[i].xy, data.profiles[j].xy);
  }

  std::size_t size() const { return m_; }

  /// Factorizes K(ell, omega); false when it cannot be made positive definite.
  bool set_hyper(double ell, double omega) {
    ell_ = ell;
    omega_ = omega;
    const Eigen::Index m = static_cast<Eigen::Index>(m_);
    Eigen::MatrixXd K = (omega * omega) * (-dist_.array() / ell).exp().matrix();
    Eigen::LLT<Eigen::MatrixXd> llt(K);
    for (double jitter = 1e-10; llt.info() != Eigen::Success; jitter *= 10.0) {
      if (jitter > 1e-4) return false;
      llt.compute(K + (jitter * omega * omega) * Eigen::MatrixXd::Identity(m, m));
    }
    K_ = std::move(K);
    P_ = llt.solve(Eigen::MatrixXd::Identity(m, m));
    logdet_K_ = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    return true;
  }

  core::CoefficientSet coeffs(double dr1, double dr2, double sigma) const {
    core::CoefficientSet c = base_;
    c.r1 += dr1;
    c.r2 += dr2;
    c.sigma = sigma;
    return c;
  }

  double profile_nll(std::size_t i, double dr1, double dr2, double ln_sigma, double d) const {
    const double sigma = std::exp(ln_sigma);
    const double ll = profile_log_likelihood(data_.profiles[i], coeffs(dr1, dr2, sigma), d, sigma);
    return std::isfinite(ll) ? -ll : kInf;
  }

  /// Everything except the GP quadratic form.
  double nonquadratic(const Eigen::VectorXd& v) const {
    if (!v.allFinite()) return kInf;
    const double sigma = std::exp(v(2));
    const double lp = priors_.dr1.log_pdf(v(0)) + priors_.dr2.log_pdf(v(1)) +
                      priors_.sigma.log_pdf(sigma) + v(2);
    if (!std::isfinite(lp)) return kInf;
    const auto m = static_cast<std::ptrdiff_t>(m_);
    std::vector<double> part(m_);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < m; ++i) part[i] = profile_nll(i, v(0), v(1), v(2), v(3 + i));
    double s = -lp;
    for (double x : part) s += x;
    return s;
  }

  double objective(const Eigen::VectorXd& v) const {
    const double a = nonquadratic(v);
    if (!std::isfinite(a)) return kInf;
    const auto d = v.tail(static_cast<Eigen::Index>(m_));
    return a + 0.5 * d.dot(P_ * d);
  }

  void gradient(const Eigen::VectorXd& v, Eigen::VectorXd& g) const {
    g.resize(v.size());
    Eigen::VectorXd vp = v;
    for (int j = 0; j < 3; ++j) {
      const double h = 1e-6 * std::max(std::abs(v(j)), 1.0);
      vp(j) = v(j) + h;
      const double fp = nonquadratic(vp);
      vp(j) = v(j) - h;
      const double fm = nonquadratic(vp);
      vp(j) = v(j);
      g(j) = (fp - fm) / (2.0 * h);
    }
    const auto m = static_cast<std::ptrdiff_t>(m_);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < m; ++i) {
      const double d = v(3 + i);
      const double h = 1e-6 * std::max(std::abs(d), 1.0);
      g(3 + i) = (profile_nll(i, v(0), v(1), v(2), d + h) - profile_nll(i, v(0), v(1), v(2), d - h)) /
                 (2.0 * h);
    }
    const auto d = v.tail(m);
    g.tail(m) += P_ * d;
  }

  /// Laplace correction 0.5 log det(I + W^1/2 K W^1/2), with Gauss-Newton weights W_i = sum_j (d ln vs_ij / d dBr_i)^2 / sigma^2.
  double laplace_logdet(const Eigen::VectorXd& v) const {
    const double sigma = std::exp(v(2));
    const core::CoefficientSet c = coeffs(v(0), v(1), sigma);
    const Eigen::Index m = static_cast<Eigen::Index>(m_);
    Eigen::VectorXd w(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const auto& p = data_.profiles[i];
      const core::ProfileParams pp = core::profile_params(p.vs30, c, v(3 + i));
      double s = 0.0;
      for (double z : p.depth_m) {
        const double e = core::dln_vs_dln_k(z, pp);
        s += e * e;
      }
      w(i) = std::sqrt(s) / sigma;
    }
    Eigen::MatrixXd B = w.asDiagonal() * K_ * w.asDiagonal();
    B.diagonal().array() += 1.0;
    Eigen::LLT<Eigen::MatrixXd> llt(B);
    if (llt.info() != Eigen::Success) return kInf;
    return llt.matrixLLT().diagonal().array().log().sum();
  }

  /// Hessian of the joint objective: per-profile 4x4 blocks of the data
  /// term, analytic prior curvatures and the GP precision.
  Eigen::MatrixXd hessian(const Eigen::VectorXd& v) const {
    const Eigen::Index m = static_cast<Eigen::Index>(m_);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m + 3, m + 3);
    std::vector<Eigen::Matrix4d> blocks(m_);
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < m; ++i) {
      const Objective fi = [&, i](const Eigen::VectorXd& x) {
        return profile_nll(static_cast<std::size_t>(i), x(0), x(1), x(2), x(3));
      };
      Eigen::VectorXd x(4);
      x << v(0), v(1), v(2), v(3 + i);
      blocks[i] = hessian_from_objective(fi, x, 1e-4);
    }
    for (Eigen::Index i = 0; i < m; ++i) {
      const Eigen::Matrix4d& b = blocks[i];
      H.topLeftCorner(3, 3) += b.topLeftCorner(3, 3);
      H.block(0, 3 + i, 3, 1) += b.block(0, 3, 3, 1);
      H.block(3 + i, 0, 1, 3) += b.block(3, 0, 1, 3);
      H(3 + i, 3 + i) += b(3, 3);
    }
    H(0, 0) += 1.0 / (priors_.dr1.sd * priors_.dr1.sd);
    H(1, 1) += 1.0 / (priors_.dr2.sd * priors_.dr2.sd);
    // ln sigma: lognormal density times its Jacobian is Normal in ln sigma
    H(2, 2) += 1.0 / (priors_.sigma.log_sd * priors_.sigma.log_sd);
    H.bottomRightCorner(m, m) += P_;
    return H;
  }

  double logdet_K() const { return logdet_K_; }
  double ell() const { return ell_; }
  double omega() const { return omega_; }

 private:
  const CalibrationData& data_;
  const PriorSpec& priors_;
  core::CoefficientSet base_;
  std::size_t m_;
  Eigen::MatrixXd dist_;
  Eigen::MatrixXd K_, P_;
  double logdet_K_ = 0.0;
  double ell_ = 1.0, omega_ = 1.0;
};

FitResult fit_spatial(const CalibrationData& data, const PriorSpec& priors,
                      const core::CoefficientSet& init, const FitOptions& opts) {
  if (!data.has_locations) throw DataError("spatial calibration needs profile locations");
  SpatialProblem prob(data, priors, init);
  const std::size_t m = prob.size();
  const MinimizeOptions mo{opts.max_iter, opts.grad_tol};

  const Objective inner_f = [&](const Eigen::VectorXd& v) { return prob.objective(v); };
  const GradientFn inner_g = [&](const Eigen::VectorXd& v, Eigen::VectorXd& g) { prob.gradient(v, g); };

  Eigen::VectorXd warm = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m + 3));
  warm(2) = std::log(init.sigma);
  double best_outer = kInf;
  MinimizeResult best_inner;
  Eigen::Vector2d best_h;

  const Objective outer = [&](const Eigen::VectorXd& h) {
    if (h(0) < kLnEllMin || h(0) > kLnEllMax || h(1) < kLnOmegaMin || h(1) > kLnOmegaMax) return kInf;
    const double ell = std::exp(h(0)), omega = std::exp(h(1));
    if (!prob.set_hyper(ell, omega)) return kInf;
    MinimizeResult r = bfgs(inner_f, inner_g, warm, mo);
    if (!std::isfinite(r.f)) return kInf;
    const double F = r.f + prob.laplace_logdet(r.x) - priors.ell_km.log_pdf(ell) -
                     priors.omega.log_pdf(omega) - h(0) - h(1);
    if (F < best_outer) {
      best_outer = F;
      best_h = h;
      warm = r.x;
      best_inner = std::move(r);
    }
    return F;
  };

  Eigen::VectorXd h0(2);
  const core::SpatialBlock start = init.spatial.value_or(core::SpatialBlock{5.0, 0.2});
  h0 << std::log(start.ell_km), std::log(start.omega);
  NelderMeadOptions nmo;
  nmo.max_evals = opts.hyper_max_evals;
  nmo.x_tol = 2e-3;
  nmo.f_tol = 1e-6;
  const MinimizeResult nm = nelder_mead(outer, h0, nmo);
  if (!std::isfinite(best_outer)) throw NumericalError("spatial calibration found no finite objective");

  // Curvature of the marginal in log hyperparameters (coarse step: the inner
  // solves are only converged to the gradient tolerance).
  Eigen::Vector2d sd_h = Eigen::Vector2d::Constant(kInf);
  {
    const double saved = best_outer;
    const Eigen::Vector2d h_opt = best_h;
    const MinimizeResult inner_opt = best_inner;
    const Eigen::MatrixXd cov = inverse_spd(hessian_from_objective(outer, h_opt, 0.05));
    for (int i = 0; i < 2; ++i) sd_h(i) = sd_from_cov(cov(i, i));
    best_outer = saved;
    best_h = h_opt;
    best_inner = inner_opt;
    warm = inner_opt.x;
  }
  const double ell = std::exp(best_h(0)), omega = std::exp(best_h(1));
  prob.set_hyper(ell, omega);
  const Eigen::VectorXd& v = best_inner.x;

  FitResult out;
  out.model = ModelKind::spatial;
  out.dr1 = v(0);
  out.dr2 = v(1);
  const double sigma = std::exp(v(2));
  out.coeffs = prob.coeffs(out.dr1, out.dr2, sigma);
  out.coeffs.spatial = core::SpatialBlock{ell, omega};
  out.neg_log_posterior = best_outer;
  out.iterations = best_inner.iterations;
  out.grad_norm = best_inner.scaled_grad;
  out.status = nm.status == OptimStatus::converged ? best_inner.status : OptimStatus::not_converged;
  out.best_restart = 0;

  const Eigen::MatrixXd cov = inverse_spd(prob.hessian(v));
  out.dBr.resize(m);
  out.dBr_sd.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    out.profile_ids.push_back(data.profiles[i].id);
    out.dBr[i] = v(3 + static_cast<Eigen::Index>(i));
    const auto k = static_cast<Eigen::Index>(3 + i);
    out.dBr_sd[i] = sd_from_cov(cov(k, k));
  }
  const double sd_dr1 = sd_from_cov(cov(0, 0)), sd_dr2 = sd_from_cov(cov(1, 1));
  out.params = {
      {"vs30_ref", init.vs30_ref, 0.0, true},
      {"vs30_w", init.vs30_w, 0.0, true},
      {"r1", out.coeffs.r1, sd_dr1, false},
      {"r2", out.coeffs.r2, sd_dr2, false},
      {"r3", init.r3, 0.0, true},
      {"s2", init.s2, 0.0, true},
      {"sigma", sigma, sigma * sd_from_cov(cov(2, 2)), false},
      {"dr1", out.dr1, sd_dr1, false},
      {"dr2", out.dr2, sd_dr2, false},
      {"ell_km", ell, ell * sd_h(0), false},
      {"omega", omega, omega * sd_h(1), false},
  };

  Theta th{init, out.dr1, out.dr2, out.dBr, geostat::GpHyper{omega, ell}};
  th.coeffs.sigma = sigma;
  out.residual_sd = residual_sd(data, th, ModelKind::spatial);

  geostat::SpatialField field;
  field.hyper = {omega, ell};
  field.projection = data.projection;
  for (std::size_t i = 0; i < m; ++i)
    field.points.push_back({data.profiles[i].id, data.profiles[i].xy, out.dBr[i], out.dBr_sd[i]});
  out.field = std::move(field);
  return out;
}

}  // namespace

const ParamEstimate& FitResult::param(const std::string& name) const {
  for (const auto& p : params)
    if (p.name == name) return p;
  throw DomainError("no parameter named " + name);
}

Eigen::VectorXd to_unconstrained(const core::CoefficientSet& c) {
  Eigen::VectorXd u(7);
  u << c.vs30_ref, std::log(c.vs30_w), c.r1, std::log(c.r2), std::log(c.r3), std::log(c.s2),
      std::log(c.sigma);
  return u;
}

core::CoefficientSet from_unconstrained(const Eigen::VectorXd& u, const core::CoefficientSet& like) {
  if (u.size() != 7) throw DomainError("stationary parameter vector must have 7 entries");
  core::CoefficientSet c = like;
  c.vs30_ref = u(0);
  c.vs30_w = std::exp(u(1));
  c.r1 = u(2);
  c.r2 = std::exp(u(3));
  c.r3 = std::exp(u(4));
  c.s2 = std::exp(u(5));
  c.sigma = std::exp(u(6));
  return c;
}

double stationary_objective(const CalibrationData& data, const PriorSpec& priors,
                            const Eigen::VectorXd& u, const core::CoefficientSet& like) {
  if (!u.allFinite()) return kInf;
  Theta th;
  th.coeffs = from_unconstrained(u, like);
  const double lp = log_prior(th, priors, ModelKind::stationary);
  if (!std::isfinite(lp)) return kInf;
  const double ll = log_likelihood(data, th, ModelKind::stationary);
  if (!std::isfinite(ll)) return kInf;
  const double log_jac = u(1) + u(3) + u(4) + u(5) + u(6);
  return -(ll + lp + log_jac);
}

FitResult map_fit(const CalibrationData& data, const PriorSpec& priors, ModelKind model,
                  const core::CoefficientSet& init, const FitOptions& options) {
  check_data(data, options);
  init.validate();
  if (model == ModelKind::stationary) return fit_stationary(data, priors, init, options);
  return fit_spatial(data, priors, init, options);
}

}  // namespace sedvel::calibrate
