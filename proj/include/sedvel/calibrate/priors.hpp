#pragma once

#include "sedvel/random.hpp"

namespace sedvel::calibrate {

// Log-densities return -inf outside the support.

struct Normal {
  double mean = 0.0;
  double sd = 1.0;
  double log_pdf(double x) const;
  double sample(Rng& rng) const;
};

/// Gamma(shape, scale); mean = shape * scale.
struct GammaDist {
  double shape = 1.0;
  double scale = 1.0;
  double log_pdf(double x) const;
  double sample(Rng& rng) const;
};

/// ln(X) ~ Normal(log_mean, log_sd).
struct LogNormal {
  double log_mean = 0.0;
  double log_sd = 1.0;
  double log_pdf(double x) const;
  double sample(Rng& rng) const;
};

struct Exponential {
  double rate = 1.0;
  double log_pdf(double x) const;
  double sample(Rng& rng) const;
};

/// InverseGamma(shape, scale); mode = scale / (shape + 1).
struct InverseGamma {
  double shape = 1.0;
  double scale = 1.0;
  double log_pdf(double x) const;
  double sample(Rng& rng) const;
};

/// Normal(0, sd) truncated to x >= 0.
struct HalfNormal {
  double sd = 1.0;
  double log_pdf(double x) const;
  double sample(Rng& rng) const;
};

struct PriorSpec {
  Normal vs30_ref{5.7, 0.1};
  GammaDist vs30_w{2.0, 0.5};
  LogNormal s2{2.0, 0.3};
  Normal r1{0.0, 5.0};
  LogNormal r2{0.5, 0.5};
  Exponential r3{2.0};
  LogNormal sigma{-1.0, 0.6};
  Normal dr1{0.0, 0.2};
  Normal dr2{0.0, 0.2};
  InverseGamma ell_km{2.0, 50.0};
  HalfNormal omega{0.02};
};

}  // namespace sedvel::calibrate
