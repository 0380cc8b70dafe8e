#include "sedvel/site/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sedvel/errors.hpp"

namespace sedvel::site {

double DensityModel::operator()(double vs) const { return std::clamp(base + slope * vs, min, max); }

SoilColumn make_column(const core::LayeredProfile& profile, const ColumnOptions& opt) {
  if (profile.size() == 0) throw DomainError("site response needs at least one layer");
  SoilColumn c;
  for (const auto& l : profile.layers()) {
    c.thickness_m.push_back(l.thickness_m);
    c.vs.push_back(l.vs_mps);
    c.density.push_back(opt.density(l.vs_mps));
  }
  const double hs = std::max(profile.layers().back().vs_mps, opt.halfspace_min_vs);
  c.halfspace = {hs, opt.density(hs)};
  c.damping = opt.damping;
  return c;
}

Spectrum transfer_function(const SoilColumn& c, std::span<const double> freqs) {
  const std::size_t n = c.vs.size();
  if (c.thickness_m.size() != n || c.density.size() != n)
    throw DomainError("soil column arrays differ in length");
  if (!(c.damping >= 0.0 && c.damping <= 0.2)) throw DomainError("damping must lie in [0, 0.2]");
  for (std::size_t i = 0; i < n; ++i)
    if (!(c.thickness_m[i] > 0.0) || !(c.vs[i] > 0.0) || !(c.density[i] > 0.0))
      throw DomainError("layer thickness, vs and density must be positive");
  if (!(c.halfspace.vs > 0.0) || !(c.halfspace.density > 0.0))
    throw DomainError("half-space vs and density must be positive");
  if (!std::is_sorted(freqs.begin(), freqs.end())) throw DomainError("frequencies must be ascending");

  const Complex factor = std::sqrt(Complex(1.0, 2.0 * c.damping));
  std::vector<Complex> vstar(n + 1), impedance(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double vs = i < n ? c.vs[i] : c.halfspace.vs;
    const double rho = i < n ? c.density[i] : c.halfspace.density;
    vstar[i] = vs * factor;
    impedance[i] = rho * vstar[i];
  }

  Spectrum tf;
  tf.freqs.assign(freqs.begin(), freqs.end());
  tf.values.resize(freqs.size());
  const Complex I(0.0, 1.0);
  for (std::size_t k = 0; k < freqs.size(); ++k) {
    const double w = 2.0 * std::numbers::pi * freqs[k];
    // up- and down-going amplitudes, free surface: A = B = 1
    Complex A(1.0, 0.0), B(1.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const Complex alpha = impedance[i] / impedance[i + 1];
      const Complex e = std::exp(I * (w * c.thickness_m[i] / vstar[i]));
      const Complex ei = 1.0 / e;
      const Complex a = 0.5 * (A * (1.0 + alpha) * e + B * (1.0 - alpha) * ei);
      const Complex b = 0.5 * (A * (1.0 - alpha) * e + B * (1.0 + alpha) * ei);
      A = a;
      B = b;
    }
    // surface 2A_1 over outcrop 2A_{n+1}
    tf.values[k] = 1.0 / A;
  }
  return tf;
}

}  // namespace sedvel::site
