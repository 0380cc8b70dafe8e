#include "sedvel/calibrate/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace sedvel::calibrate {

const char* to_string(OptimStatus s) {
  switch (s) {
    case OptimStatus::converged: return "converged";
    case OptimStatus::not_converged: return "not-converged";
    case OptimStatus::line_search_failed: return "line-search-failed";
  }
  return "unknown";
}

double scaled_gradient_norm(const Eigen::VectorXd& x, double f, const Eigen::VectorXd& g) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    m = std::max(m, std::abs(g(i)) * std::max(std::abs(x(i)), 1.0));
  return m / std::max(std::abs(f), 1.0);
}

Eigen::VectorXd central_gradient(const Objective& f, const Eigen::VectorXd& x, double rel_step) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = rel_step * std::max(std::abs(x(i)), 1.0);
    xp(i) = x(i) + h;
    const double fp = f(xp);
    xp(i) = x(i) - h;
    const double fm = f(xp);
    xp(i) = x(i);
    g(i) = (fp - fm) / (2.0 * h);
  }
  return g;
}

MinimizeResult bfgs(const Objective& f, const GradientFn& grad, Eigen::VectorXd x0,
                    const MinimizeOptions& opts) {
  const Eigen::Index n = x0.size();
  MinimizeResult r;
  r.x = std::move(x0);
  r.f = f(r.x);
  r.evaluations = 1;
  r.grad.resize(n);
  if (!std::isfinite(r.f)) {
    r.status = OptimStatus::line_search_failed;
    r.scaled_grad = std::numeric_limits<double>::infinity();
    return r;
  }
  grad(r.x, r.grad);
  r.scaled_grad = scaled_gradient_norm(r.x, r.f, r.grad);

  Eigen::MatrixXd Hinv = Eigen::MatrixXd::Identity(n, n);
  bool fresh = true;  // Hinv is (scaled) identity
  Eigen::VectorXd g_new(n);
  for (r.iterations = 0; r.iterations < opts.max_iter; ++r.iterations) {
    if (r.scaled_grad < opts.grad_tol) {
      r.status = OptimStatus::converged;
      return r;
    }
    Eigen::VectorXd dir = -Hinv * r.grad;
    double slope = dir.dot(r.grad);
    if (!(slope < 0.0)) {
      Hinv.setIdentity();
      fresh = true;
      dir = -r.grad;
      slope = dir.dot(r.grad);
    }
    // First step from identity: keep it to a unit move in the worst coordinate.
    double t = 1.0;
    if (fresh) t = std::min(1.0, 1.0 / std::max(dir.lpNorm<Eigen::Infinity>(), 1e-300));

    bool accepted = false;
    Eigen::VectorXd x_new;
    double f_new = 0.0;
    for (int ls = 0; ls < 60; ++ls) {
      x_new = r.x + t * dir;
      f_new = f(x_new);
      ++r.evaluations;
      if (std::isfinite(f_new) && f_new <= r.f + 1e-4 * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      if (!fresh) {
        Hinv.setIdentity();
        fresh = true;
        continue;
      }
      r.status = OptimStatus::line_search_failed;
      return r;
    }
    grad(x_new, g_new);
    const Eigen::VectorXd s = x_new - r.x;
    const Eigen::VectorXd y = g_new - r.grad;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (fresh) {
        Hinv *= sy / y.squaredNorm();
        fresh = false;
      }
      const double rho = 1.0 / sy;
      const Eigen::VectorXd Hy = Hinv * y;
      const double yHy = y.dot(Hy);
      Hinv += ((sy + yHy) * rho * rho) * (s * s.transpose()) - rho * (Hy * s.transpose() + s * Hy.transpose());
    }
    r.x = x_new;
    r.f = f_new;
    r.grad = g_new;
    r.scaled_grad = scaled_gradient_norm(r.x, r.f, r.grad);
  }
  r.status = r.scaled_grad < opts.grad_tol ? OptimStatus::converged : OptimStatus::not_converged;
  return r;
}

Eigen::MatrixXd hessian_from_gradient(const GradientFn& grad, const Eigen::VectorXd& x,
                                      double rel_step) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXd H(n, n);
  Eigen::VectorXd xp = x, gp(n), gm(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double h = rel_step * std::max(std::abs(x(i)), 1.0);
    xp(i) = x(i) + h;
    grad(xp, gp);
    xp(i) = x(i) - h;
    grad(xp, gm);
    xp(i) = x(i);
    H.col(i) = (gp - gm) / (2.0 * h);
  }
  return 0.5 * (H + H.transpose());
}

Eigen::MatrixXd hessian_from_objective(const Objective& f, const Eigen::VectorXd& x,
                                       double rel_step) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXd H(n, n);
  const double f0 = f(x);
  Eigen::VectorXd h(n);
  for (Eigen::Index i = 0; i < n; ++i) h(i) = rel_step * std::max(std::abs(x(i)), 1.0);
  Eigen::VectorXd xp = x;
  for (Eigen::Index i = 0; i < n; ++i) {
    xp(i) = x(i) + h(i);
    const double fp = f(xp);
    xp(i) = x(i) - h(i);
    const double fm = f(xp);
    xp(i) = x(i);
    H(i, i) = (fp - 2.0 * f0 + fm) / (h(i) * h(i));
    for (Eigen::Index j = 0; j < i; ++j) {
      double acc = 0.0;
      for (int si = -1; si <= 1; si += 2)
        for (int sj = -1; sj <= 1; sj += 2) {
          xp(i) = x(i) + si * h(i);
          xp(j) = x(j) + sj * h(j);
          acc += si * sj * f(xp);
        }
      xp(i) = x(i);
      xp(j) = x(j);
      H(i, j) = H(j, i) = acc / (4.0 * h(i) * h(j));
    }
  }
  return H;
}

MinimizeResult nelder_mead(const Objective& f, Eigen::VectorXd x0, const NelderMeadOptions& opts) {
  const Eigen::Index n = x0.size();
  std::vector<Eigen::VectorXd> pts(n + 1, x0);
  std::vector<double> val(n + 1);
  MinimizeResult r;
  for (Eigen::Index i = 0; i < n; ++i) pts[i + 1](i) += opts.initial_step;
  for (Eigen::Index i = 0; i <= n; ++i) val[i] = f(pts[i]);
  r.evaluations = static_cast<int>(n + 1);

  std::vector<std::size_t> order(n + 1);
  auto sort = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
      const double va = std::isfinite(val[a]) ? val[a] : std::numeric_limits<double>::max();
      const double vb = std::isfinite(val[b]) ? val[b] : std::numeric_limits<double>::max();
      return va < vb;
    });
  };
  r.status = OptimStatus::not_converged;
  while (r.evaluations < opts.max_evals) {
    sort();
    const auto best = order.front(), worst = order.back(), second = order[n - 1];
    double diam = 0.0;
    for (Eigen::Index i = 0; i <= n; ++i)
      diam = std::max(diam, (pts[i] - pts[best]).lpNorm<Eigen::Infinity>());
    if (diam < opts.x_tol && std::abs(val[worst] - val[best]) < opts.f_tol * std::max(1.0, std::abs(val[best]))) {
      r.status = OptimStatus::converged;
      break;
    }
    ++r.iterations;
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i <= n; ++i)
      if (static_cast<std::size_t>(i) != worst) centroid += pts[i];
    centroid /= static_cast<double>(n);

    auto eval = [&](const Eigen::VectorXd& p) {
      ++r.evaluations;
      const double v = f(p);
      return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };
    const Eigen::VectorXd xr = centroid + (centroid - pts[worst]);
    const double fr = eval(xr);
    if (fr < val[best]) {
      const Eigen::VectorXd xe = centroid + 2.0 * (centroid - pts[worst]);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe;
        val[worst] = fe;
      } else {
        pts[worst] = xr;
        val[worst] = fr;
      }
      continue;
    }
    if (fr < val[second]) {
      pts[worst] = xr;
      val[worst] = fr;
      continue;
    }
    const bool outside = fr < val[worst];
    const Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid))
                                       : Eigen::VectorXd(centroid + 0.5 * (pts[worst] - centroid));
    const double fc = eval(xc);
    if (fc < (outside ? fr : val[worst])) {
      pts[worst] = xc;
      val[worst] = fc;
      continue;
    }
    for (Eigen::Index i = 0; i <= n; ++i) {
      if (static_cast<std::size_t>(i) == best) continue;
      pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
      val[i] = eval(pts[i]);
    }
  }
  sort();
  r.x = pts[order.front()];
  r.f = val[order.front()];
  return r;
}

}  // namespace sedvel::calibrate
