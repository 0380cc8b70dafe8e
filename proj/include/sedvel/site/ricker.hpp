#pragma once

#include <vector>

#include "sedvel/site/motion.hpp"

namespace sedvel::site {

/// Half-width of the wavelet support in units of 1/fc. Beyond it the
/// envelope exp(-pi^2 fc^2 t^2) is below 1e-9.
inline constexpr double kRickerHalfSupport = 1.5;

/// a(t) = (1 - 2 pi^2 fc^2 (t - t0)^2) exp(-pi^2 fc^2 (t - t0)^2), units of g,
/// sampled at t = i dt for i < round(duration / dt). Throws DomainError when
/// dt > 1/(20 fc) or when [t0 - 1.5/fc, t0 + 1.5/fc] does not fit in the record.
MotionRecord ricker(double fc, double dt, double duration, double t0);

/// Analytic Fourier amplitude of the unit-peak wavelet:
/// 2 f^2 / (sqrt(pi) fc^3) exp(-f^2 / fc^2).
double ricker_spectrum(double f, double fc);

struct EnsembleSpec {
  double f_lo = 0.1;  ///< Hz
  double f_hi = 10.0;
  int count = 20;
  double dt = 0.005;
  double duration = 40.96;
};

struct Ensemble {
  std::vector<double> fc;
  std::vector<double> amplitude;
  std::vector<MotionRecord> members;
  /// max/min of the mean analytic spectrum over the band, in dB.
  double flatness_db = 0.0;
};

/// `count` wavelets with log-spaced fc over [f_lo, f_hi], each centred at
/// 1.5/fc_min, scaled by non-negative least squares so the ensemble-mean
/// analytic Fourier amplitude is flat over the band. Throws DomainError on an
/// invalid spec and NumericalError when the mean spectrum varies by more than
/// 3 dB.
Ensemble ensemble_input(const EnsembleSpec& spec);

}  // namespace sedvel::site
