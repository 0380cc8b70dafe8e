#pragma once

#include <span>
#include <string>
#include <vector>

#include "sedvel/site/motion.hpp"

namespace sedvel::site {

/// Intensity measures in SI units.
struct ImSet {
  double pga = 0.0;    ///< m/s^2
  double pgv = 0.0;    ///< m/s
  double pgd = 0.0;    ///< m
  double arias = 0.0;  ///< m/s
  double d5_95 = 0.0;  ///< s
  std::vector<double> fas_freqs;  ///< Hz, positive FFT frequencies
  std::vector<double> fas;        ///< m/s
  std::vector<double> psa_periods;  ///< s
  std::vector<double> psa;          ///< m/s^2
  /// Set when the record is shorter than 10 cycles of the longest period.
  bool psa_period_flag = false;
};

/// 50 log-spaced periods from 0.01 to 4 s.
std::vector<double> default_psa_periods();

/// Peak absolute pseudo-spectral acceleration omega^2 max|u| of a linear
/// oscillator by the Newmark average-acceleration scheme.
double psa_newmark(std::span<const double> acc_si, double dt, double period, double damping);

/// psa_newmark for many periods in one pass over the record.
std::vector<double> psa_spectrum(std::span<const double> acc_si, double dt,
                                 std::span<const double> periods, double damping);

/// Velocity and displacement by cumulative trapezoidal integration, each
/// corrected by subtracting the straight line through its end value.
void integrate_with_baseline(std::span<const double> acc_si, double dt, std::vector<double>& vel,
                             std::vector<double>& disp);

ImSet intensity_measures(const MotionRecord& motion, std::span<const double> psa_periods,
                         double damping = 0.05);

}  // namespace sedvel::site
