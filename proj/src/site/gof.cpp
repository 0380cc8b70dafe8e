#include "sedvel/site/gof.hpp"

#include <cmath>

#include "sedvel/errors.hpp"

namespace sedvel::site {

namespace {

constexpr double kBandMin = 0.01, kBandMax = 10.0;

bool in_band(double f, double lo, double hi) { return f >= lo && f <= hi; }

}  // namespace

const char* to_string(Im im) {
  switch (im) {
    case Im::pga: return "pga";
    case Im::pgv: return "pgv";
    case Im::pgd: return "pgd";
    case Im::arias: return "arias";
    case Im::d5_95: return "d5_95";
    case Im::fas: return "fas";
    case Im::psa: return "psa";
  }
  return "unknown";
}

std::array<Band, 3> fp_bands(double fp) {
  if (!(fp > kBandMin) || !(2.0 * fp < kBandMax))
    throw DomainError("fP = " + std::to_string(fp) + " Hz leaves an empty frequency band");
  return {Band{"low", kBandMin, fp}, Band{"mid", fp, 2.0 * fp}, Band{"high", 2.0 * fp, kBandMax}};
}

int band_index(double f, double fp) {
  if (f < kBandMin || f > kBandMax) return -1;
  if (f < fp) return 0;
  if (f < 2.0 * fp) return 1;
  return 2;
}

GofScores gof_score(const ImSet& ref, const ImSet& model, double f_lo, double f_hi) {
  GofScores g;
  auto scalar = [&](Im im, double r, double m) {
    const auto i = static_cast<std::size_t>(im);
    if (!(r > 0.0) || !(m > 0.0)) {
      g.diagnostics.push_back(std::string(to_string(im)) + ": zero intensity, excluded");
      return;
    }
    g.score[i] = std::log(m / r);
    g.valid[i] = true;
  };
  auto spectral = [&](Im im, const std::vector<double>& freq, const std::vector<double>& r,
                      const std::vector<double>& m, bool periods) {
    const auto i = static_cast<std::size_t>(im);
    if (r.size() != m.size() || freq.size() != r.size())
      throw DomainError(std::string(to_string(im)) + ": reference and model grids differ");
    double s = 0.0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < r.size(); ++k) {
      const double f = periods ? 1.0 / freq[k] : freq[k];
      if (!in_band(f, f_lo, f_hi)) continue;
      if (!(r[k] > 0.0) || !(m[k] > 0.0)) continue;
      s += std::log(m[k] / r[k]);
      ++n;
    }
    if (n == 0) {
      g.diagnostics.push_back(std::string(to_string(im)) + ": no grid points in band, excluded");
      return;
    }
    g.score[i] = s / static_cast<double>(n);
    g.valid[i] = true;
  };
  if (ref.fas_freqs != model.fas_freqs || ref.psa_periods != model.psa_periods)
    throw DomainError("reference and model spectra are on different grids");
  scalar(Im::pga, ref.pga, model.pga);
  scalar(Im::pgv, ref.pgv, model.pgv);
  scalar(Im::pgd, ref.pgd, model.pgd);
  scalar(Im::arias, ref.arias, model.arias);
  scalar(Im::d5_95, ref.d5_95, model.d5_95);
  spectral(Im::fas, ref.fas_freqs, ref.fas, model.fas, false);
  spectral(Im::psa, ref.psa_periods, ref.psa, model.psa, true);

  double s = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < kImCount; ++i)
    if (g.valid[i]) {
      s += g.score[i];
      ++n;
    }
  g.aggregate = n ? s / static_cast<double>(n) : 0.0;
  return g;
}

}  // namespace sedvel::site
