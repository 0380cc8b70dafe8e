#include "sedvel/geostat/semivariogram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace sedvel::geostat {

std::vector<double> uniform_bin_edges(double width_m, double max_lag_m) {
  if (!(width_m > 0.0) || !(max_lag_m > width_m)) throw DomainError("invalid bin specification");
  std::vector<double> e;
  const auto n = static_cast<std::size_t>(std::llround(max_lag_m / width_m));
  for (std::size_t i = 0; i <= n; ++i) e.push_back(width_m * static_cast<double>(i));
  return e;
}

namespace {

struct BinSums {
  std::vector<double> sq;
  std::vector<double> lag;
  std::vector<std::size_t> count;
};

BinSums accumulate(const ResidualProfile& p, std::span<const double> edges) {
  const std::size_t nb = edges.size() - 1;
  BinSums s{std::vector<double>(nb, 0.0), std::vector<double>(nb, 0.0),
            std::vector<std::size_t>(nb, 0)};
  const std::size_t n = p.depths_m.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double h = std::abs(p.depths_m[j] - p.depths_m[i]);
      if (h < edges.front() || h >= edges.back()) continue;
      const auto b = static_cast<std::size_t>(
          std::upper_bound(edges.begin(), edges.end(), h) - edges.begin() - 1);
      const double d = p.eps[i] - p.eps[j];
      s.sq[b] += 0.5 * d * d;
      s.lag[b] += h;
      ++s.count[b];
    }
  }
  return s;
}

}  // namespace

Semivariogram empirical_semivariogram(std::span<const ResidualProfile> profiles,
                                      std::span<const double> bin_edges) {
  if (bin_edges.size() < 2) throw DomainError("need at least one bin");
  for (std::size_t i = 1; i < bin_edges.size(); ++i)
    if (!(bin_edges[i] > bin_edges[i - 1])) throw DomainError("bin edges must increase");
  for (const auto& p : profiles) {
    if (p.depths_m.size() != p.eps.size()) throw DataError("residual profile size mismatch");
    if (p.depths_m.size() < 2) throw DataError("residual profiles need at least 2 layers");
  }

  std::vector<BinSums> partial(profiles.size());
  const auto np = static_cast<std::ptrdiff_t>(profiles.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < np; ++i) partial[i] = accumulate(profiles[i], bin_edges);

  const std::size_t nb = bin_edges.size() - 1;
  std::vector<double> sq(nb, 0.0), lag(nb, 0.0);
  std::vector<std::size_t> count(nb, 0);
  for (const auto& s : partial)
    for (std::size_t b = 0; b < nb; ++b) {
      sq[b] += s.sq[b];
      lag[b] += s.lag[b];
      count[b] += s.count[b];
    }

  Semivariogram out;
  out.edges.assign(bin_edges.begin(), bin_edges.end());
  for (std::size_t b = 0; b < nb; ++b) {
    out.counts.push_back(count[b]);
    if (count[b] == 0) {
      out.gamma.push_back(std::numeric_limits<double>::quiet_NaN());
      out.lags.push_back(0.5 * (bin_edges[b] + bin_edges[b + 1]));
    } else {
      const double c = static_cast<double>(count[b]);
      out.gamma.push_back(sq[b] / c);
      out.lags.push_back(lag[b] / c);
    }
  }
  return out;
}

double exponential_semivariogram(double h, double range_r_m, double sill_s) {
  return sill_s * -std::expm1(-h / range_r_m);
}

SemivariogramFit fit_semivariogram(const Semivariogram& emp, std::size_t min_pairs, int max_iter) {
  std::vector<double> h, g, w;
  for (std::size_t b = 0; b < emp.bins(); ++b) {
    if (emp.counts[b] < std::max<std::size_t>(min_pairs, 1) || !std::isfinite(emp.gamma[b])) continue;
    h.push_back(emp.lags[b]);
    g.push_back(emp.gamma[b]);
    w.push_back(static_cast<double>(emp.counts[b]));
  }
  const auto m = static_cast<Eigen::Index>(h.size());
  if (m < 4) throw DataError("semivariogram fit needs at least 4 populated bins");

  // Initial sill: weighted mean over the outer half of the lags.
  double s0 = 0.0, ws = 0.0;
  for (Eigen::Index i = m / 2; i < m; ++i) {
    s0 += w[i] * g[i];
    ws += w[i];
  }
  s0 /= ws;
  if (!(s0 > 0.0)) throw DataError("semivariogram is identically zero; nothing to fit");
  double r0 = h[m - 1] / 3.0;
  for (Eigen::Index i = 0; i < m; ++i)
    if (g[i] >= (1.0 - std::exp(-1.0)) * s0) {
      r0 = std::max(h[i], 1e-3 * h[m - 1]);
      break;
    }

  // Levenberg-Marquardt on (ln r, ln s).
  Eigen::Vector2d theta(std::log(r0), std::log(s0));
  auto cost = [&](const Eigen::Vector2d& t) {
    const double r = std::exp(t(0)), s = std::exp(t(1));
    double c = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      const double e = g[i] - exponential_semivariogram(h[i], r, s);
      c += w[i] * e * e;
    }
    return c;
  };
  auto jacobian = [&](const Eigen::Vector2d& t, Eigen::MatrixXd& J, Eigen::VectorXd& res) {
    const double r = std::exp(t(0)), s = std::exp(t(1));
    J.resize(m, 2);
    res.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const double e = std::exp(-h[i] / r);
      res(i) = g[i] - s * (1.0 - e);
      J(i, 0) = -s * e * h[i] / r;  // d model / d ln r
      J(i, 1) = s * (1.0 - e);      // d model / d ln s
    }
  };

  double lambda = 1e-3;
  double c = cost(theta);
  int it = 0;
  bool converged = false;
  Eigen::MatrixXd J;
  Eigen::VectorXd res;
  const Eigen::VectorXd W = Eigen::Map<const Eigen::VectorXd>(w.data(), m);
  for (; it < max_iter; ++it) {
    jacobian(theta, J, res);
    const Eigen::Matrix2d A = J.transpose() * W.asDiagonal() * J;
    const Eigen::Vector2d b = J.transpose() * (W.asDiagonal() * res);
    if (b.lpNorm<Eigen::Infinity>() <= 1e-14 * std::max(c, 1e-300) || c == 0.0) {
      converged = true;
      break;
    }
    bool improved = false;
    for (int tries = 0; tries < 60; ++tries) {
      Eigen::Matrix2d Ad = A;
      Ad.diagonal() *= (1.0 + lambda);
      const Eigen::Vector2d step = Ad.ldlt().solve(b);
      const Eigen::Vector2d cand = theta + step;
      const double cc = cost(cand);
      if (std::isfinite(cc) && cc <= c) {
        const double rel = (c - cc) / std::max(c, 1e-300);
        theta = cand;
        c = cc;
        lambda = std::max(lambda / 10.0, 1e-12);
        improved = true;
        if (step.lpNorm<Eigen::Infinity>() < 1e-12 || rel < 1e-15) converged = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!improved) {
      converged = true;  // no downhill step exists at machine precision
      break;
    }
    if (converged) break;
  }

  SemivariogramFit fit;
  fit.range_r_m = std::exp(theta(0));
  fit.sill_s = std::exp(theta(1));
  fit.iterations = it + 1;

  // Standard errors in natural parameters.
  jacobian(theta, J, res);
  Eigen::MatrixXd Jn = J;
  Jn.col(0) /= fit.range_r_m;
  Jn.col(1) /= fit.sill_s;
  const Eigen::Matrix2d A = Jn.transpose() * W.asDiagonal() * Jn;
  const double dof = static_cast<double>(m - 2);
  const double s2 = (res.array().square() * W.array()).sum() / dof;
  const Eigen::Matrix2d cov = s2 * A.inverse();
  fit.se_r = std::sqrt(std::max(cov(0, 0), 0.0));
  fit.se_s = std::sqrt(std::max(cov(1, 1), 0.0));

  if (!converged)
    throw SemivariogramFitError("semivariogram fit did not converge in " +
                                    std::to_string(max_iter) + " iterations",
                                fit);
  return fit;
}

}  // namespace sedvel::geostat
