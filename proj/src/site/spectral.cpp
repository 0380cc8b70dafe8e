#include "sedvel/site/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <unsupported/Eigen/FFT>

#include "sedvel/errors.hpp"

namespace sedvel::site {

namespace {

constexpr double kLowCornerSkip = 0.01;

bool on_grid(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > 1e-9 * std::max(1.0, std::abs(b[i]))) return false;
  return true;
}

std::vector<Complex> resample_tf(const Spectrum& tf, const std::vector<double>& grid) {
  if (tf.freqs.size() != tf.values.size() || tf.freqs.empty())
    throw DomainError("transfer function frequencies and values differ in length");
  if (on_grid(grid, tf.freqs)) return tf.values;
  const double top = tf.freqs.back();
  if (grid.back() > top * (1.0 + 1e-9))
    throw DomainError("transfer function does not reach the record's Nyquist frequency");
  std::vector<double> mag(tf.values.size()), phase(tf.values.size());
  for (std::size_t i = 0; i < tf.values.size(); ++i) {
    mag[i] = std::abs(tf.values[i]);
    phase[i] = std::arg(tf.values[i]);
    if (i > 0) {
      // unwrap
      double d = phase[i] - phase[i - 1];
      d -= 2.0 * std::numbers::pi * std::round(d / (2.0 * std::numbers::pi));
      phase[i] = phase[i - 1] + d;
    }
  }
  std::vector<Complex> out(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double f = grid[k];
    double m, ph;
    if (f <= tf.freqs.front()) {
      m = mag.front();
      ph = phase.front();
    } else {
      const auto it = std::lower_bound(tf.freqs.begin(), tf.freqs.end(), f);
      const std::size_t j = std::min<std::size_t>(static_cast<std::size_t>(it - tf.freqs.begin()),
                                                  tf.freqs.size() - 1);
      const double f0 = tf.freqs[j - 1], f1 = tf.freqs[j];
      const double w = f1 > f0 ? (f - f0) / (f1 - f0) : 1.0;
      m = (1 - w) * mag[j - 1] + w * mag[j];
      ph = (1 - w) * phase[j - 1] + w * phase[j];
    }
    out[k] = std::polar(m, ph);
  }
  return out;
}

}  // namespace

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::vector<double> fft_frequencies(std::size_t samples, double dt) {
  const std::size_t n = next_pow2(samples);
  std::vector<double> f(n / 2 + 1);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = static_cast<double>(k) / (static_cast<double>(n) * dt);
  return f;
}

namespace {

// Plans keep their twiddle tables, so reuse one per thread.
Eigen::FFT<double>& thread_fft() {
  thread_local Eigen::FFT<double> fft = [] {
    Eigen::FFT<double> f;
    f.SetFlag(Eigen::FFT<double>::HalfSpectrum);
    return f;
  }();
  return fft;
}

}  // namespace

std::vector<Complex> rfft(std::span<const double> x, std::size_t n) {
  std::vector<double> buf(n, 0.0);
  std::copy_n(x.begin(), std::min(x.size(), n), buf.begin());
  Eigen::FFT<double>& fft = thread_fft();
  std::vector<Complex> out;
  fft.fwd(out, buf);
  out.resize(n / 2 + 1);
  return out;
}

std::vector<double> irfft(std::span<const Complex> X, std::size_t n) {
  Eigen::FFT<double>& fft = thread_fft();
  std::vector<Complex> in(X.begin(), X.end());
  std::vector<double> out;
  fft.inv(out, in, static_cast<Eigen::Index>(n));
  return out;
}

MotionRecord propagate(const MotionRecord& motion, const Spectrum& tf) {
  motion.validate();
  const std::size_t n = next_pow2(motion.acc.size());
  const std::vector<double> grid = fft_frequencies(motion.acc.size(), motion.dt);
  const std::vector<Complex> h = resample_tf(tf, grid);
  std::vector<Complex> X = rfft(motion.acc, n);
  for (std::size_t k = 0; k < X.size(); ++k) X[k] *= h[k];
  // the Nyquist bin of a real signal is real
  X.back() = Complex(X.back().real(), 0.0);
  X.front() = Complex(X.front().real(), 0.0);
  std::vector<double> y = irfft(X, n);
  y.resize(motion.acc.size());
  MotionRecord out = motion;
  out.acc = std::move(y);
  return out;
}

double bandpass_gain(double f, double f_lo, double f_hi) {
  if (f <= 0.0) return f_lo <= kLowCornerSkip ? 1.0 : 0.0;
  double g = 1.0 / std::sqrt(1.0 + std::pow(f / f_hi, 8));
  if (f_lo > kLowCornerSkip) g /= std::sqrt(1.0 + std::pow(f_lo / f, 8));
  return g;
}

std::vector<MotionRecord> bandpass_many(const MotionRecord& motion,
                                        std::span<const std::pair<double, double>> bands) {
  motion.validate();
  const std::size_t n = next_pow2(motion.acc.size());
  const std::vector<double> grid = fft_frequencies(motion.acc.size(), motion.dt);
  const std::vector<Complex> X = rfft(motion.acc, n);
  std::vector<MotionRecord> out;
  std::vector<Complex> Y(X.size());
  for (const auto& [lo, hi] : bands) {
    if (!(hi > lo) || !(lo >= 0.0)) throw DomainError("band-pass corners must satisfy 0 <= f_lo < f_hi");
    for (std::size_t k = 0; k < X.size(); ++k) Y[k] = X[k] * bandpass_gain(grid[k], lo, hi);
    std::vector<double> y = irfft(Y, n);
    y.resize(motion.acc.size());
    MotionRecord m = motion;
    m.acc = std::move(y);
    out.push_back(std::move(m));
  }
  return out;
}

MotionRecord bandpass(const MotionRecord& motion, double f_lo, double f_hi) {
  const std::pair<double, double> band{f_lo, f_hi};
  return bandpass_many(motion, std::span(&band, 1)).front();
}

}  // namespace sedvel::site
