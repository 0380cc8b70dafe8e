// Serial reference vs OpenMP kernels. Thread count comes from OMP_NUM_THREADS.

#include <cmath>
#include <map>
#include <vector>

#include <benchmark/benchmark.h>

#include "sedvel/calibrate/dataset.hpp"
#include "sedvel/calibrate/synth.hpp"
#include "sedvel/geostat/depth_residuals.hpp"
#include "sedvel/random.hpp"
#include "sedvel/reference/serial_kernels.hpp"

using namespace sedvel;

namespace {

geostat::SpatialField field(std::size_t n) {
  Rng rng(1);
  geostat::SpatialField f;
  f.hyper = {0.3156, 1.9104};
  for (std::size_t i = 0; i < n; ++i)
    f.points.push_back({"p" + std::to_string(i), {20.0 * uniform01(rng), 20.0 * uniform01(rng)},
                        0.3 * standard_normal(rng), 0.0});
  return f;
}

std::vector<geostat::PlanePoint> queries(std::size_t n) {
  Rng rng(2);
  std::vector<geostat::PlanePoint> q;
  for (std::size_t i = 0; i < n; ++i) q.push_back({20.0 * uniform01(rng), 20.0 * uniform01(rng)});
  return q;
}

calibrate::CalibrationData dataset(std::size_t n) {
  calibrate::SynthLayout layout;
  layout.n_profiles = n;
  const auto ds = calibrate::synth_dataset(core::stationary_preset(), layout, 3);
  std::map<std::string, double> meta;
  for (std::size_t i = 0; i < ds.profiles.size(); ++i) meta[ds.profiles[i].id()] = ds.vs30[i];
  return calibrate::prepare_dataset(ds.profiles, meta, calibrate::Vs30Source::metadata);
}

std::vector<geostat::ResidualProfile> residuals(std::size_t n) {
  std::vector<geostat::ResidualProfile> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (double z = 0.5; z < 100.0; z += 1.0) out[i].depths_m.push_back(z);
    out[i].eps = geostat::sample_depth_residuals(out[i].depths_m, 0.082, 11.93, 0.082, derive_seed(4, "bench", i));
  }
  return out;
}

io::AsciiGrid vs30_grid(std::size_t side) {
  io::AsciiGrid g;
  g.ncols = g.nrows = side;
  g.xll = -122.5;
  g.yll = 37.3;
  g.cellsize = 0.8 / double(side);
  for (std::size_t i = 0; i < side * side; ++i) g.values.push_back(150.0 + double(i % 97) * 8.0);
  return g;
}

template <bool Serial>
void BM_Krige(benchmark::State& state) {
  const geostat::Kriger k(field(200));
  const auto q = queries(std::size_t(state.range(0)));
  for (auto _ : state) {
    if constexpr (Serial) benchmark::DoNotOptimize(reference::krige_serial(k, q));
    else benchmark::DoNotOptimize(k.predict(q));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Serial>
void BM_Semivariogram(benchmark::State& state) {
  const auto res = residuals(std::size_t(state.range(0)));
  const auto edges = geostat::uniform_bin_edges();
  for (auto _ : state) {
    if constexpr (Serial) benchmark::DoNotOptimize(reference::empirical_semivariogram_serial(res, edges));
    else benchmark::DoNotOptimize(geostat::empirical_semivariogram(res, edges));
  }
}

template <bool Serial>
void BM_LogLikelihood(benchmark::State& state) {
  const auto data = dataset(std::size_t(state.range(0)));
  calibrate::Theta th;
  th.coeffs = core::stationary_preset();
  for (auto _ : state) {
    if constexpr (Serial)
      benchmark::DoNotOptimize(reference::log_likelihood_serial(data, th, calibrate::ModelKind::stationary));
    else benchmark::DoNotOptimize(calibrate::log_likelihood(data, th, calibrate::ModelKind::stationary));
  }
}

template <bool Serial>
void BM_GridSlice(benchmark::State& state) {
  const auto g = vs30_grid(std::size_t(state.range(0)));
  const auto c = core::spatial_preset();
  const merge::SliceInputs in{&g, &c, nullptr, nullptr};
  merge::SliceOptions mc;
  mc.sd_method = merge::SdMethod::monte_carlo;
  mc.draws = 50;
  const auto region = merge::full_region(g);
  for (auto _ : state) {
    if constexpr (Serial)
      benchmark::DoNotOptimize(
          reference::grid_slice_serial(region, 25.0, merge::SliceKind::spatial_unconditional, in, mc));
    else
      benchmark::DoNotOptimize(merge::grid_slice(region, 25.0, merge::SliceKind::spatial_unconditional, in, mc));
  }
}

}  // namespace

BENCHMARK(BM_Krige<true>)->Name("krige/serial")->Arg(1000)->Arg(10000)->UseRealTime();
BENCHMARK(BM_Krige<false>)->Name("krige/parallel")->Arg(1000)->Arg(10000)->UseRealTime();
BENCHMARK(BM_Semivariogram<true>)->Name("semivariogram/serial")->Arg(200)->Arg(2000)->UseRealTime();
BENCHMARK(BM_Semivariogram<false>)->Name("semivariogram/parallel")->Arg(200)->Arg(2000)->UseRealTime();
BENCHMARK(BM_LogLikelihood<true>)->Name("log_likelihood/serial")->Arg(200)->Arg(2000)->UseRealTime();
BENCHMARK(BM_LogLikelihood<false>)->Name("log_likelihood/parallel")->Arg(200)->Arg(2000)->UseRealTime();
BENCHMARK(BM_GridSlice<true>)->Name("grid_slice/serial")->Arg(32)->Arg(128)->UseRealTime();
BENCHMARK(BM_GridSlice<false>)->Name("grid_slice/parallel")->Arg(32)->Arg(128)->UseRealTime();

BENCHMARK_MAIN();
