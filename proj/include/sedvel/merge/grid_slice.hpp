#pragma once

#include <cstdint>
#include <optional>

#include "sedvel/core/coefficients.hpp"
#include "sedvel/geostat/kriging.hpp"
#include "sedvel/io/ascii_grid.hpp"
#include "sedvel/merge/background.hpp"

namespace sedvel::merge {

enum class SliceKind { stationary, spatial_conditioned, spatial_unconditional, background };

const char* to_string(SliceKind k);
SliceKind slice_kind_from_string(const std::string& s);

/// Lon/lat box; cells of the Vs30 grid whose centres fall inside are kept.
struct Region {
  double lat_min = 0.0, lat_max = 0.0;
  double lon_min = 0.0, lon_max = 0.0;
};

/// Whole extent of a grid.
Region full_region(const io::AsciiGrid& g);

struct SliceInputs {
  const io::AsciiGrid* vs30 = nullptr;           ///< required; defines the cell geometry
  const core::CoefficientSet* coeffs = nullptr;  ///< required for model kinds
  const geostat::Kriger* kriger = nullptr;       ///< spatial_conditioned
  const BackgroundModel* background = nullptr;   ///< background kind
};

enum class SdMethod { delta, monte_carlo };

struct SliceOptions {
  SdMethod sd_method = SdMethod::delta;
  int draws = 100;  ///< Monte Carlo draws per cell
  std::uint64_t seed = 0;
};

/// vs_mean is the median at the cell's mean dBr; vs_sd [m/s] is the spread
/// induced by the dBr uncertainty (first-order in ln vs, or sampled).
struct Slice {
  io::AsciiGrid vs_mean;
  io::AsciiGrid vs_sd;
};

/// Depth slice over a region. Cells with no-data Vs30 are no-data in both
/// outputs (except for the background kind, which does not use Vs30).
/// Parallel over cells; the output does not depend on the thread count.
Slice grid_slice(const Region& region, double depth_m, SliceKind kind, const SliceInputs& in,
                 const SliceOptions& options = {});

/// Sub-grid of `g` covering the region; throws DomainError when the region is
/// not inside the grid.
io::AsciiGrid crop(const io::AsciiGrid& g, const Region& region);

/// Mean and sd of one cell. Exposed for the serial reference implementation.
struct CellValue {
  double mean = 0.0;
  double sd = 0.0;
};
CellValue slice_cell(double lat, double lon, double vs30, double depth_m, SliceKind kind,
                     const SliceInputs& in, const SliceOptions& options, std::uint64_t cell_index);

}  // namespace sedvel::merge
