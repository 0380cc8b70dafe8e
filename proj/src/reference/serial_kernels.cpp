#include "sedvel/reference/serial_kernels.hpp"

#include <cmath>
#include <limits>

namespace sedvel::reference {

std::vector<geostat::Prediction> krige_serial(const geostat::Kriger& kriger,
                                              std::span<const geostat::PlanePoint> queries) {
  std::vector<geostat::Prediction> out;
  out.reserve(queries.size());
  for (const auto& q : queries) out.push_back(kriger.predict(q));
  return out;
}

geostat::Semivariogram empirical_semivariogram_serial(std::span<const geostat::ResidualProfile> profiles,
                                                      std::span<const double> edges) {
  if (edges.size() < 2) throw DomainError("need at least one bin");
  const std::size_t nb = edges.size() - 1;
  std::vector<double> sq(nb, 0.0), lag(nb, 0.0);
  std::vector<std::size_t> count(nb, 0);
  // Same summation order as the parallel version: per-profile partial sums,
  // then added in profile order.
  for (const auto& p : profiles) {
    if (p.depths_m.size() != p.eps.size()) throw DataError("residual profile size mismatch");
    if (p.depths_m.size() < 2) throw DataError("residual profiles need at least 2 layers");
    std::vector<double> psq(nb, 0.0), plag(nb, 0.0);
    std::vector<std::size_t> pc(nb, 0);
    for (std::size_t i = 0; i < p.depths_m.size(); ++i)
      for (std::size_t j = i + 1; j < p.depths_m.size(); ++j) {
        const double h = std::abs(p.depths_m[j] - p.depths_m[i]);
        if (h < edges.front() || h >= edges.back()) continue;
        std::size_t b = 0;
        while (b + 1 < nb && h >= edges[b + 1]) ++b;
        const double d = p.eps[i] - p.eps[j];
        psq[b] += 0.5 * d * d;
        plag[b] += h;
        ++pc[b];
      }
    for (std::size_t b = 0; b < nb; ++b) {
      sq[b] += psq[b];
      lag[b] += plag[b];
      count[b] += pc[b];
    }
  }
  geostat::Semivariogram out;
  out.edges.assign(edges.begin(), edges.end());
  for (std::size_t b = 0; b < nb; ++b) {
    out.counts.push_back(count[b]);
    const double c = static_cast<double>(count[b]);
    out.gamma.push_back(count[b] ? sq[b] / c : std::numeric_limits<double>::quiet_NaN());
    out.lags.push_back(count[b] ? lag[b] / c : 0.5 * (edges[b] + edges[b + 1]));
  }
  return out;
}

double log_likelihood_serial(const calibrate::CalibrationData& data, const calibrate::Theta& theta,
                             calibrate::ModelKind model) {
  const core::CoefficientSet c = theta.effective(model);
  const bool spatial = model == calibrate::ModelKind::spatial;
  double sum = 0.0;
  for (std::size_t i = 0; i < data.profiles.size(); ++i)
    sum += calibrate::profile_log_likelihood(data.profiles[i], c, spatial ? theta.dBr.at(i) : 0.0,
                                             c.sigma);
  return sum;
}

merge::Slice grid_slice_serial(const merge::Region& region, double depth_m, merge::SliceKind kind,
                               const merge::SliceInputs& in, const merge::SliceOptions& options) {
  const io::AsciiGrid vs30 = merge::crop(*in.vs30, region);
  merge::Slice out{vs30.blank_like(), vs30.blank_like()};
  for (std::size_t row = 0; row < vs30.nrows; ++row)
    for (std::size_t col = 0; col < vs30.ncols; ++col) {
      const std::size_t idx = row * vs30.ncols + col;
      const merge::CellValue v = merge::slice_cell(vs30.cell_lat(row), vs30.cell_lon(col),
                                                   vs30.values[idx], depth_m, kind, in, options, idx);
      out.vs_mean.values[idx] = v.mean;
      out.vs_sd.values[idx] = v.sd;
    }
  return out;
}

}  // namespace sedvel::reference
