#include "sedvel/site/intensity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sedvel/errors.hpp"
#include "sedvel/site/spectral.hpp"

namespace sedvel::site {

namespace {

// Time at which the normalized cumulative energy first reaches `level`,
// interpolated between samples.
double ramp_time(const std::vector<double>& cum, double level, double dt) {
  const auto it = std::lower_bound(cum.begin(), cum.end(), level);
  if (it == cum.begin()) return 0.0;
  if (it == cum.end()) return static_cast<double>(cum.size() - 1) * dt;
  const auto i = static_cast<std::size_t>(it - cum.begin());
  const double c0 = cum[i - 1], c1 = cum[i];
  const double w = c1 > c0 ? (level - c0) / (c1 - c0) : 0.0;
  return (static_cast<double>(i - 1) + w) * dt;
}

}  // namespace

std::vector<double> default_psa_periods() {
  std::vector<double> p(50);
  for (int i = 0; i < 50; ++i) p[i] = 0.01 * std::pow(400.0, i / 49.0);
  return p;
}

double psa_newmark(std::span<const double> acc, double dt, double period, double damping) {
  if (!(period > 0.0)) throw DomainError("oscillator period must be positive");
  const double w = 2.0 * std::numbers::pi / period;
  const double k = w * w, c = 2.0 * damping * w;  // unit mass
  // average acceleration: gamma = 1/2, beta = 1/4
  const double kh = k + 2.0 * c / dt + 4.0 / (dt * dt);
  double u = 0.0, v = 0.0, a = acc.empty() ? 0.0 : -acc[0];
  double umax = 0.0;
  for (std::size_t i = 1; i < acc.size(); ++i) {
    const double p = -acc[i] + (4.0 / (dt * dt) + 2.0 * c / dt) * u + (4.0 / dt + c) * v + a;
    const double un = p / kh;
    const double vn = 2.0 * (un - u) / dt - v;
    const double an = 4.0 * (un - u) / (dt * dt) - 4.0 * v / dt - a;
    u = un;
    v = vn;
    a = an;
    umax = std::max(umax, std::abs(u));
  }
  return k * umax;
}

std::vector<double> psa_spectrum(std::span<const double> acc, double dt,
                                 std::span<const double> periods, double damping) {
  const std::size_t m = periods.size();
  std::vector<double> k(m), alpha(m), beta(m), inv_kh(m);
  for (std::size_t j = 0; j < m; ++j) {
    if (!(periods[j] > 0.0)) throw DomainError("oscillator period must be positive");
    const double w = 2.0 * std::numbers::pi / periods[j];
    const double c = 2.0 * damping * w;
    k[j] = w * w;
    alpha[j] = 4.0 / (dt * dt) + 2.0 * c / dt;
    beta[j] = 4.0 / dt + c;
    inv_kh[j] = 1.0 / (k[j] + 2.0 * c / dt + 4.0 / (dt * dt));
  }
  const double a0 = acc.empty() ? 0.0 : -acc[0];
  std::vector<double> u(m, 0.0), v(m, 0.0), a(m, a0), umax(m, 0.0);
  for (std::size_t i = 1; i < acc.size(); ++i) {
    const double g = acc[i];
    for (std::size_t j = 0; j < m; ++j) {
      const double un = (-g + alpha[j] * u[j] + beta[j] * v[j] + a[j]) * inv_kh[j];
      const double du = un - u[j];
      const double vn = 2.0 * du / dt - v[j];
      a[j] = 4.0 * du / (dt * dt) - 4.0 * v[j] / dt - a[j];
      v[j] = vn;
      u[j] = un;
      umax[j] = std::max(umax[j], std::abs(un));
    }
  }
  for (std::size_t j = 0; j < m; ++j) umax[j] *= k[j];
  return umax;
}

void integrate_with_baseline(std::span<const double> acc, double dt, std::vector<double>& vel,
                             std::vector<double>& disp) {
  const std::size_t n = acc.size();
  vel.assign(n, 0.0);
  disp.assign(n, 0.0);
  if (n < 2) return;
  for (std::size_t i = 1; i < n; ++i) vel[i] = vel[i - 1] + 0.5 * dt * (acc[i - 1] + acc[i]);
  const double T = static_cast<double>(n - 1);
  const double v_end = vel.back();
  for (std::size_t i = 0; i < n; ++i) vel[i] -= v_end * static_cast<double>(i) / T;
  for (std::size_t i = 1; i < n; ++i) disp[i] = disp[i - 1] + 0.5 * dt * (vel[i - 1] + vel[i]);
  const double d_end = disp.back();
  for (std::size_t i = 0; i < n; ++i) disp[i] -= d_end * static_cast<double>(i) / T;
}

ImSet intensity_measures(const MotionRecord& motion, std::span<const double> periods, double damping) {
  motion.validate();
  if (!std::is_sorted(periods.begin(), periods.end()))
    throw DomainError("PSA periods must be ascending");
  const double s = motion.to_si();
  const double dt = motion.dt;
  std::vector<double> a(motion.acc.size());
  std::transform(motion.acc.begin(), motion.acc.end(), a.begin(), [s](double x) { return x * s; });

  ImSet im;
  for (double x : a) im.pga = std::max(im.pga, std::abs(x));

  std::vector<double> vel, disp;
  integrate_with_baseline(a, dt, vel, disp);
  for (double x : vel) im.pgv = std::max(im.pgv, std::abs(x));
  for (double x : disp) im.pgd = std::max(im.pgd, std::abs(x));

  std::vector<double> cum(a.size());
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    e += a[i] * a[i] * dt;
    cum[i] = e;
  }
  im.arias = std::numbers::pi / (2.0 * kGravity) * e;
  if (e > 0.0) {
    for (double& c : cum) c /= e;
    im.d5_95 = ramp_time(cum, 0.95, dt) - ramp_time(cum, 0.05, dt);
  }

  const std::size_t n = next_pow2(a.size());
  const std::vector<Complex> X = rfft(a, n);
  const std::vector<double> f = fft_frequencies(a.size(), dt);
  for (std::size_t k = 1; k < X.size(); ++k) {
    im.fas_freqs.push_back(f[k]);
    im.fas.push_back(std::abs(X[k]) * dt);
  }

  im.psa_periods.assign(periods.begin(), periods.end());
  im.psa = psa_spectrum(a, dt, periods, damping);
  if (!periods.empty() && motion.duration() < 10.0 * periods.back()) im.psa_period_flag = true;
  return im;
}

}  // namespace sedvel::site
