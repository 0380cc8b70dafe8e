#pragma once

// Small random-input generators for property tests. Every generator takes an
// Rng so a failing case can be replayed from its seed.

#include <cmath>
#include <string>
#include <vector>

#include "sedvel/core/coefficients.hpp"
#include "sedvel/core/profile.hpp"
#include "sedvel/random.hpp"

namespace sedvel::gen {

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

inline double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

inline int uniform_int(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(uniform01(rng) * (hi - lo + 1));
}

/// Coefficients scattered around the stationary preset, inside the support.
inline core::CoefficientSet random_coeffs(Rng& rng) {
  core::CoefficientSet c = core::stationary_preset();
  c.vs30_ref = uniform(rng, 5.5, 7.0);
  c.vs30_w = uniform(rng, 0.2, 1.0);
  c.r1 = uniform(rng, -3.5, -1.0);
  c.r2 = uniform(rng, 0.5, 7.0);
  c.r3 = uniform(rng, 0.0, 1.0);
  c.s2 = uniform(rng, 1.0, 9.0);
  c.sigma = uniform(rng, 0.1, 0.6);
  return c;
}

/// Layered column with random thicknesses and velocities.
inline core::LayeredProfile random_profile(Rng& rng, const std::string& id, double vs_lo = 100.0,
                                           double vs_hi = 1500.0, int min_layers = 1,
                                           int max_layers = 15) {
  const int n = uniform_int(rng, min_layers, max_layers);
  std::vector<double> h, vs;
  for (int i = 0; i < n; ++i) {
    h.push_back(uniform(rng, 0.5, 20.0));
    vs.push_back(log_uniform(rng, vs_lo, vs_hi));
  }
  return core::LayeredProfile::from_thicknesses(id, h, vs);
}

/// Random column whose velocity never decreases with depth.
inline core::LayeredProfile random_increasing_profile(Rng& rng, const std::string& id,
                                                      double vs_start, double depth_m) {
  std::vector<double> h, vs;
  double z = 0.0, v = vs_start;
  while (z < depth_m) {
    const double t = std::min(uniform(rng, 1.0, 25.0), depth_m - z);
    h.push_back(t);
    vs.push_back(v);
    z += t;
    v *= uniform(rng, 1.0, 1.4);
  }
  return core::LayeredProfile::from_thicknesses(id, h, vs);
}

}  // namespace sedvel::gen
