#pragma once

#include <complex>
#include <span>
#include <vector>

#include "sedvel/site/motion.hpp"

namespace sedvel::site {

using Complex = std::complex<double>;

/// Complex spectrum sampled at ascending frequencies [Hz].
struct Spectrum {
  std::vector<double> freqs;
  std::vector<Complex> values;
};

std::size_t next_pow2(std::size_t n);

/// Non-negative FFT frequencies k / (n dt), k = 0..n/2, of a record padded to
/// next_pow2(samples).
std::vector<double> fft_frequencies(std::size_t samples, double dt);

/// Real-input FFT of x zero-padded to n (a power of two); n/2 + 1 bins.
std::vector<Complex> rfft(std::span<const double> x, std::size_t n);
/// Inverse of rfft; returns n real samples.
std::vector<double> irfft(std::span<const Complex> X, std::size_t n);

/// Output motion whose spectrum is the input spectrum times tf. When tf is
/// not on the FFT grid its magnitude and unwrapped phase are interpolated
/// linearly; DomainError when the grid reaches beyond tf's last frequency.
/// The output has the input's length.
MotionRecord propagate(const MotionRecord& motion, const Spectrum& tf);

/// Zero-phase band-pass with 4th-order Butterworth magnitude at each corner:
/// 1/sqrt(1 + (f_lo/f)^8) * 1/sqrt(1 + (f/f_hi)^8). The low corner is skipped
/// when f_lo <= 0.01 Hz.
double bandpass_gain(double f, double f_lo, double f_hi);
MotionRecord bandpass(const MotionRecord& motion, double f_lo, double f_hi);

/// Band-passed copies for several bands from a single forward transform.
std::vector<MotionRecord> bandpass_many(const MotionRecord& motion,
                                        std::span<const std::pair<double, double>> bands);

}  // namespace sedvel::site
