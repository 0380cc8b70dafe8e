#include "sedvel/core/scaling.hpp"

#include <cmath>

#include "sedvel/errors.hpp"

namespace sedvel::core {

namespace {

constexpr double kDepth30 = 30.0;
constexpr double kBelowStar = kDepth30 - kZStar;

void require_vs30(double vs30) {
  if (!(vs30 > 0.0) || !std::isfinite(vs30)) throw DomainError("vs30 must be positive and finite");
}

// ((1 + kL)^p - 1) / (k p), the travel-time integral of the power-law branch
// normalized by vs0; ln(1 + kL)/k in the p -> 0 limit.
double branch_integral(double k, double p) {
  const double lg = std::log1p(k * kBelowStar);
  const double a = p * lg;
  if (a == 0.0) return lg / k;
  return std::expm1(a) / a * lg / k;
}

}  // namespace

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

double vs30_scaled(double vs30, const CoefficientSet& c) {
  require_vs30(vs30);
  return (std::log(vs30) - c.vs30_ref) / c.vs30_w;
}

double n_of_vs30(double vs30, const CoefficientSet& c) {
  return 1.0 + c.s2 * sigmoid(vs30_scaled(vs30, c));
}

double k_of_vs30(double vs30, const CoefficientSet& c, double dBr) {
  if (!std::isfinite(dBr)) throw DomainError("dBr must be finite");
  const double x = vs30_scaled(vs30, c);
  return std::exp(c.r1 + c.r2 * sigmoid(x) + c.r3 * c.vs30_w * softplus(x) + dBr);
}

double vs0_of(double vs30, double k, double n) {
  require_vs30(vs30);
  if (!(k > 0.0)) throw DomainError("k must be > 0");
  if (!(n >= 1.0)) throw DomainError("n must be >= 1");
  const double p = 1.0 - 1.0 / n;
  return vs30 * (kZStar + branch_integral(k, p)) / kDepth30;
}

double dln_vs0_dln_k(double k, double n) {
  if (!(k > 0.0)) throw DomainError("k must be > 0");
  if (!(n >= 1.0)) throw DomainError("n must be >= 1");
  const double p = 1.0 - 1.0 / n;
  const double g = branch_integral(k, p);
  // k dg/dk = L (1 + kL)^(p-1) - g
  const double kdg = kBelowStar * std::exp((p - 1.0) * std::log1p(k * kBelowStar)) - g;
  return kdg / (kZStar + g);
}

ProfileParams profile_params(double vs30, const CoefficientSet& c, double dBr) {
  ProfileParams p;
  p.vs30 = vs30;
  p.dBr = dBr;
  p.n = n_of_vs30(vs30, c);
  p.k = k_of_vs30(vs30, c, dBr);
  p.vs0 = vs0_of(vs30, p.k, p.n);
  return p;
}

double median_vs(double z, const ProfileParams& p) {
  if (!(z >= 0.0)) throw DomainError("depth must be >= 0");
  if (z <= kZStar) return p.vs0;
  return p.vs0 * std::exp(std::log1p(p.k * (z - kZStar)) / p.n);
}

double dln_vs_dln_k(double z, const ProfileParams& p) {
  if (!(z >= 0.0)) throw DomainError("depth must be >= 0");
  const double comp = dln_vs0_dln_k(p.k, p.n);
  if (z <= kZStar) return comp;
  const double u = p.k * (z - kZStar);
  return comp + u / (1.0 + u) / p.n;
}

}  // namespace sedvel::core
