#include "sedvel/site/ricker.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "sedvel/errors.hpp"

namespace sedvel::site {

namespace {

constexpr double kPi = std::numbers::pi;

// Lawson-Hanson non-negative least squares, min |A x - b| with x >= 0.
Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  const Eigen::Index n = A.cols();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(n, false);
  auto solve_passive = [&] {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < n; ++j)
      if (passive[j]) idx.push_back(j);
    Eigen::MatrixXd Ap(A.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) Ap.col(static_cast<Eigen::Index>(k)) = A.col(idx[k]);
    const Eigen::VectorXd zp = Ap.colPivHouseholderQr().solve(b);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
    for (std::size_t k = 0; k < idx.size(); ++k) z(idx[k]) = zp(static_cast<Eigen::Index>(k));
    return z;
  };
  for (int outer = 0; outer < 3 * n; ++outer) {
    const Eigen::VectorXd w = A.transpose() * (b - A * x);
    Eigen::Index best = -1;
    double wmax = 1e-12 * w.cwiseAbs().maxCoeff();
    for (Eigen::Index j = 0; j < n; ++j)
      if (!passive[j] && w(j) > wmax) {
        wmax = w(j);
        best = j;
      }
    if (best < 0) break;
    passive[best] = true;
    for (int inner = 0; inner < 3 * n; ++inner) {
      const Eigen::VectorXd z = solve_passive();
      bool feasible = true;
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[j] && z(j) <= 0.0) feasible = false;
      if (feasible) {
        x = z;
        break;
      }
      double alpha = 1.0;
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[j] && z(j) <= 0.0) alpha = std::min(alpha, x(j) / (x(j) - z(j)));
      x += alpha * (z - x);
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[j] && x(j) <= 1e-15) {
          passive[j] = false;
          x(j) = 0.0;
        }
    }
  }
  return x;
}

}  // namespace

MotionRecord ricker(double fc, double dt, double duration, double t0) {
  if (!(fc > 0.0)) throw DomainError("Ricker centre frequency must be positive");
  if (!(dt > 0.0)) throw DomainError("Ricker dt must be positive");
  if (dt > 1.0 / (20.0 * fc) * (1.0 + 1e-12))
    throw DomainError("Ricker wavelet is under-resolved: dt > 1/(20 fc)");
  const auto n = static_cast<std::size_t>(std::llround(duration / dt));
  const double half = kRickerHalfSupport / fc;
  if (t0 - half < -1e-12 || t0 + half > static_cast<double>(n) * dt + 1e-12)
    throw DomainError("Ricker support [t0 - 1.5/fc, t0 + 1.5/fc] does not fit in the record");
  MotionRecord m;
  m.label = "ricker_" + std::to_string(fc);
  m.units = "g";
  m.dt = dt;
  m.acc.resize(n);
  const double a = kPi * kPi * fc * fc;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * dt - t0;
    const double u = a * t * t;
    m.acc[i] = (1.0 - 2.0 * u) * std::exp(-u);
  }
  m.validate();
  return m;
}

double ricker_spectrum(double f, double fc) {
  return 2.0 * f * f / (std::sqrt(kPi) * fc * fc * fc) * std::exp(-f * f / (fc * fc));
}

Ensemble ensemble_input(const EnsembleSpec& spec) {
  if (!(spec.f_lo > 0.0) || !(spec.f_hi > spec.f_lo))
    throw DomainError("ensemble band must satisfy 0 < f_lo < f_hi");
  if (spec.count < 2) throw DomainError("ensemble needs at least 2 wavelets");
  Ensemble e;
  const int n = spec.count;
  const double ratio = std::log(spec.f_hi / spec.f_lo);
  for (int i = 0; i < n; ++i) e.fc.push_back(spec.f_lo * std::exp(ratio * i / (n - 1)));

  // Relative least squares on a log-spaced grid across the band.
  constexpr int kGrid = 200;
  Eigen::MatrixXd A(kGrid, n);
  Eigen::VectorXd b = Eigen::VectorXd::Ones(kGrid);
  std::vector<double> grid(kGrid);
  for (int g = 0; g < kGrid; ++g) {
    grid[g] = spec.f_lo * std::exp(ratio * g / (kGrid - 1));
    for (int i = 0; i < n; ++i) A(g, i) = ricker_spectrum(grid[g], e.fc[i]) / n;
  }
  const Eigen::VectorXd amp = nnls(A, b);
  const Eigen::VectorXd mean = A * amp;
  const double lo = mean.minCoeff(), hi = mean.maxCoeff();
  e.flatness_db = lo > 0.0 ? 20.0 * std::log10(hi / lo) : std::numeric_limits<double>::infinity();
  if (!(e.flatness_db < 3.0))
    throw NumericalError("Ricker ensemble cannot be made flat within 3 dB (" +
                         std::to_string(e.flatness_db) + " dB); use more wavelets per decade");

  const double t0 = kRickerHalfSupport / spec.f_lo;
  for (int i = 0; i < n; ++i) {
    MotionRecord m = ricker(e.fc[i], spec.dt, spec.duration, t0);
    for (double& v : m.acc) v *= amp(i);
    e.amplitude.push_back(amp(i));
    e.members.push_back(std::move(m));
  }
  return e;
}

}  // namespace sedvel::site
