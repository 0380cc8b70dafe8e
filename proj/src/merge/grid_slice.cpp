#include "sedvel/merge/grid_slice.hpp"

#include <cmath>
#include <limits>

#include "sedvel/core/scaling.hpp"
#include "sedvel/errors.hpp"
#include "sedvel/parallel.hpp"
#include "sedvel/random.hpp"

namespace sedvel::merge {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_inputs(SliceKind kind, const SliceInputs& in) {
  if (in.vs30 == nullptr) throw DomainError("grid slice needs a Vs30 grid");
  if (kind != SliceKind::background && in.coeffs == nullptr)
    throw DomainError("grid slice needs model coefficients");
  if (kind == SliceKind::spatial_conditioned && in.kriger == nullptr)
    throw DomainError("conditioned slice needs a spatial field");
  if (kind == SliceKind::spatial_unconditional && !in.coeffs->spatial && in.kriger == nullptr)
    throw DomainError("unconditional slice needs omega (coefficient spatial block)");
  if (kind == SliceKind::background && in.background == nullptr)
    throw DomainError("background slice needs a background model");
}

}  // namespace

const char* to_string(SliceKind k) {
  switch (k) {
    case SliceKind::stationary: return "stationary";
    case SliceKind::spatial_conditioned: return "spatial_conditioned";
    case SliceKind::spatial_unconditional: return "spatial_unconditional";
    case SliceKind::background: return "background";
  }
  return "unknown";
}

SliceKind slice_kind_from_string(const std::string& s) {
  for (auto k : {SliceKind::stationary, SliceKind::spatial_conditioned,
                 SliceKind::spatial_unconditional, SliceKind::background})
    if (s == to_string(k)) return k;
  throw DomainError("unknown slice kind '" + s + "'");
}

Region full_region(const io::AsciiGrid& g) {
  return {g.yll, g.yll + static_cast<double>(g.nrows) * g.cellsize, g.xll,
          g.xll + static_cast<double>(g.ncols) * g.cellsize};
}

io::AsciiGrid crop(const io::AsciiGrid& g, const Region& r) {
  const Region full = full_region(g);
  const double tol = 1e-9 * std::max(1.0, g.cellsize);
  if (!(r.lat_max > r.lat_min) || !(r.lon_max > r.lon_min))
    throw DomainError("region must have positive extent");
  if (r.lat_min < full.lat_min - tol || r.lat_max > full.lat_max + tol ||
      r.lon_min < full.lon_min - tol || r.lon_max > full.lon_max + tol)
    throw DomainError("region lies outside the Vs30 grid");
  std::size_t c0 = g.ncols, c1 = 0, r0 = g.nrows, r1 = 0;
  for (std::size_t c = 0; c < g.ncols; ++c)
    if (g.cell_lon(c) >= r.lon_min && g.cell_lon(c) <= r.lon_max) {
      c0 = std::min(c0, c);
      c1 = std::max(c1, c);
    }
  for (std::size_t row = 0; row < g.nrows; ++row)
    if (g.cell_lat(row) >= r.lat_min && g.cell_lat(row) <= r.lat_max) {
      r0 = std::min(r0, row);
      r1 = std::max(r1, row);
    }
  if (c0 > c1 || r0 > r1) throw DomainError("region contains no Vs30 cell centre");
  if (c0 == 0 && r0 == 0 && c1 + 1 == g.ncols && r1 + 1 == g.nrows) return g;
  io::AsciiGrid out;
  out.ncols = c1 - c0 + 1;
  out.nrows = r1 - r0 + 1;
  out.cellsize = g.cellsize;
  out.nodata = g.nodata;
  out.xll = g.xll + static_cast<double>(c0) * g.cellsize;
  out.yll = g.yll + static_cast<double>(g.nrows - 1 - r1) * g.cellsize;
  out.values.reserve(out.ncols * out.nrows);
  for (std::size_t row = r0; row <= r1; ++row)
    for (std::size_t c = c0; c <= c1; ++c) out.values.push_back(g.at(row, c));
  return out;
}

CellValue slice_cell(double lat, double lon, double vs30, double depth_m, SliceKind kind,
                     const SliceInputs& in, const SliceOptions& opts, std::uint64_t cell_index) {
  if (kind == SliceKind::background) return {in.background->query(lat, lon, depth_m), 0.0};
  if (!std::isfinite(vs30)) return {kNaN, kNaN};

  geostat::Prediction d{0.0, 0.0};
  if (kind == SliceKind::spatial_conditioned) {
    const auto& f = in.kriger->field();
    d = in.kriger->predict(f.projection.project({lat, lon}));
  } else if (kind == SliceKind::spatial_unconditional) {
    d.sd = in.coeffs->spatial ? in.coeffs->spatial->omega : in.kriger->field().hyper.omega;
  }
  const core::ProfileParams p = core::profile_params(vs30, *in.coeffs, d.mean);
  const double mean = core::median_vs(depth_m, p);
  if (d.sd == 0.0) return {mean, 0.0};
  if (opts.sd_method == SdMethod::delta)
    return {mean, mean * d.sd * std::abs(core::dln_vs_dln_k(depth_m, p))};

  Rng rng = make_rng(opts.seed, "cell", cell_index);
  double s = 0.0, ss = 0.0;
  for (int i = 0; i < opts.draws; ++i) {
    const double dBr = d.mean + d.sd * standard_normal(rng);
    const double v = core::median_vs(depth_m, core::profile_params(vs30, *in.coeffs, dBr));
    s += v;
    ss += v * v;
  }
  const double n = opts.draws;
  const double var = std::max(0.0, (ss - s * s / n) / (n - 1.0));
  return {mean, std::sqrt(var)};
}

Slice grid_slice(const Region& region, double depth_m, SliceKind kind, const SliceInputs& in,
                 const SliceOptions& opts) {
  check_inputs(kind, in);
  if (!(depth_m >= 0.0)) throw DomainError("slice depth must be >= 0");
  if (opts.sd_method == SdMethod::monte_carlo && opts.draws < 2)
    throw DomainError("Monte Carlo sd needs at least 2 draws");
  const io::AsciiGrid vs30 = crop(*in.vs30, region);
  Slice out{vs30.blank_like(), vs30.blank_like()};
  const auto ncell = static_cast<std::ptrdiff_t>(vs30.values.size());
  LoopErrors errors;
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t idx = 0; idx < ncell; ++idx) {
    errors.run(idx, [&] {
      const std::size_t row = idx / vs30.ncols, col = idx % vs30.ncols;
      const CellValue v = slice_cell(vs30.cell_lat(row), vs30.cell_lon(col), vs30.values[idx],
                                     depth_m, kind, in, opts, static_cast<std::uint64_t>(idx));
      out.vs_mean.values[idx] = v.mean;
      out.vs_sd.values[idx] = v.sd;
    });
  }
  errors.rethrow();
  return out;
}

}  // namespace sedvel::merge
