#include "sedvel/calibrate/priors.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace sedvel::calibrate {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

// Marsaglia-Tsang; shape < 1 handled by the usual power boost.
double gamma_draw(double shape, Rng& rng) {
  if (shape < 1.0) {
    const double u = uniform01(rng);
    return gamma_draw(shape + 1.0, rng) * std::pow(std::max(u, 1e-300), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    double x, v;
    do {
      x = standard_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform01(rng);
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(std::max(u, 1e-300)) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace

double Normal::log_pdf(double x) const {
  const double z = (x - mean) / sd;
  return -0.5 * z * z - std::log(sd) - kHalfLog2Pi;
}
double Normal::sample(Rng& rng) const { return mean + sd * standard_normal(rng); }

double GammaDist::log_pdf(double x) const {
  if (!(x > 0.0)) return kNegInf;
  return (shape - 1.0) * std::log(x) - x / scale - std::lgamma(shape) - shape * std::log(scale);
}
double GammaDist::sample(Rng& rng) const { return scale * gamma_draw(shape, rng); }

double LogNormal::log_pdf(double x) const {
  if (!(x > 0.0)) return kNegInf;
  const double z = (std::log(x) - log_mean) / log_sd;
  return -0.5 * z * z - std::log(log_sd) - kHalfLog2Pi - std::log(x);
}
double LogNormal::sample(Rng& rng) const {
  return std::exp(log_mean + log_sd * standard_normal(rng));
}

double Exponential::log_pdf(double x) const {
  if (!(x >= 0.0)) return kNegInf;
  return std::log(rate) - rate * x;
}
double Exponential::sample(Rng& rng) const {
  return -std::log(1.0 - uniform01(rng)) / rate;
}

double InverseGamma::log_pdf(double x) const {
  if (!(x > 0.0)) return kNegInf;
  return shape * std::log(scale) - std::lgamma(shape) - (shape + 1.0) * std::log(x) - scale / x;
}
double InverseGamma::sample(Rng& rng) const { return scale / gamma_draw(shape, rng); }

double HalfNormal::log_pdf(double x) const {
  if (!(x >= 0.0)) return kNegInf;
  return std::log(2.0) + Normal{0.0, sd}.log_pdf(x);
}
double HalfNormal::sample(Rng& rng) const { return std::abs(sd * standard_normal(rng)); }

}  // namespace sedvel::calibrate
