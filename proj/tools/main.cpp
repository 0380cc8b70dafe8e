// sedvel command-line interface.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include "sedvel/calibrate/dataset.hpp"
#include "sedvel/calibrate/fit_io.hpp"
#include "sedvel/calibrate/map_fit.hpp"
#include "sedvel/calibrate/synth.hpp"
#include "sedvel/core/coefficients.hpp"
#include "sedvel/core/profile.hpp"
#include "sedvel/core/profile_io.hpp"
#include "sedvel/core/scaling.hpp"
#include "sedvel/errors.hpp"
#include "sedvel/geostat/depth_residuals.hpp"
#include "sedvel/geostat/kriging.hpp"
#include "sedvel/geostat/semivariogram.hpp"
#include "sedvel/io/ascii_grid.hpp"
#include "sedvel/io/csv.hpp"
#include "sedvel/merge/background.hpp"
#include "sedvel/merge/grid_slice.hpp"
#include "sedvel/merge/merge.hpp"
#include "sedvel/random.hpp"
#include "sedvel/site/evaluate.hpp"

namespace fs = std::filesystem;
using namespace sedvel;

namespace {

enum ExitCode { kOk = 0, kUsage = 2, kData = 3, kNumerical = 4 };

/// Usage problems detected after parsing (missing inputs for a mode, ...).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  fs::path out_dir = ".";
  std::uint64_t seed = 0;
  int threads = 0;
  std::string coeffs;  ///< path or preset:<name>
  fs::path field;
  double omega = -1.0;  ///< overrides the field's hyperparameters when >= 0
  double ell_km = -1.0;
};

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
}

core::CoefficientSet load_coeffs(const std::string& spec, core::CoefficientSet fallback) {
  if (spec.empty()) return fallback;
  if (spec.rfind("preset:", 0) == 0) {
    const std::string name = spec.substr(7);
    if (name == "stationary") return core::stationary_preset(core::Summary::median);
    if (name == "stationary-mean") return core::stationary_preset(core::Summary::mean);
    if (name == "spatial") return core::spatial_preset(core::Summary::median);
    if (name == "spatial-mean") return core::spatial_preset(core::Summary::mean);
    throw UsageError("unknown preset '" + name +
                     "' (stationary, stationary-mean, spatial, spatial-mean)");
  }
  return core::load_coefficients(spec);
}

geostat::SpatialField load_field(const Common& c, const core::CoefficientSet& coeffs) {
  if (c.field.empty()) throw UsageError("this mode needs --field");
  geostat::GpHyper h{0.0, 1.0};
  if (coeffs.spatial) h = {coeffs.spatial->omega, coeffs.spatial->ell_km};
  if (c.omega >= 0.0) h.omega = c.omega;
  if (c.ell_km > 0.0) h.ell_km = c.ell_km;
  if (!coeffs.spatial && c.omega < 0.0)
    throw UsageError("spatial field needs omega and ell (coefficient file or --omega/--ell)");
  return geostat::read_spatial_field(c.field, h);
}

core::DepthBlock require_depth_block(const core::CoefficientSet& c) {
  if (!c.depth) throw DataError("coefficients carry no along-depth semivariogram (range_r_m, sill_s)");
  return *c.depth;
}

std::string zero_pad(std::size_t v, int width) {
  std::string s = std::to_string(v);
  return std::string(s.size() < static_cast<std::size_t>(width) ? width - s.size() : 0, '0') + s;
}

// ---------------------------------------------------------------- profile

struct ProfileArgs {
  double vs30 = 0.0;
  std::optional<double> lat, lon;
  std::string mode = "stationary";
  double depth = 100.0;
  int realizations = 0;
  double total_var = -1.0;
  std::string id = "site";
};

int cmd_profile(const Common& c, const ProfileArgs& a) {
  const bool spatial = a.mode != "stationary";
  if (spatial && (!a.lat || !a.lon)) throw UsageError("mode " + a.mode + " needs --lat and --lon");
  const core::CoefficientSet coeffs = load_coeffs(
      c.coeffs, spatial ? core::spatial_preset() : core::stationary_preset());
  coeffs.validate();

  geostat::Prediction d{0.0, 0.0};
  if (a.mode == "spatial-conditioned") {
    const geostat::Kriger k(load_field(c, coeffs));
    d = k.predict(k.field().projection.project({*a.lat, *a.lon}));
  } else if (a.mode == "spatial-unconditional") {
    if (!coeffs.spatial) throw DataError("spatial-unconditional mode needs omega in the coefficients");
    d.sd = coeffs.spatial->omega;
  }
  std::optional<core::Location> loc;
  if (a.lat && a.lon) loc = core::Location{*a.lat, *a.lon};

  const core::ProfileParams p = core::profile_params(a.vs30, coeffs, d.mean);
  core::LayeredProfile median = core::discretize(p, a.depth);
  median.set_id(a.id);
  median.set_location(loc);
  const fs::path median_path = c.out_dir / (a.id + "_median.csv");
  write_text(median_path, core::format_profiles({median}));

  std::printf("median profile: %s\n", median_path.string().c_str());
  std::printf("dBr mean %.6g sd %.6g\n", d.mean, d.sd);
  if (a.depth >= 30.0) std::printf("realized vs30 %.6g m/s\n", core::time_averaged_vs(median));
  const double z1000 = merge::z_vs_threshold(p, merge::kTransitionVs);
  std::printf("depth to 1000 m/s %.6g m\n", z1000);

  if (a.realizations > 0) {
    const core::DepthBlock db = require_depth_block(coeffs);
    const double total = a.total_var >= 0.0 ? a.total_var : db.sill_s;
    const int width = std::max<int>(3, static_cast<int>(std::to_string(a.realizations).size()));
    std::vector<double> mids;
    for (const auto& l : median.layers()) mids.push_back(l.mid_m());
    for (int r = 0; r < a.realizations; ++r) {
      const std::uint64_t s = derive_seed(c.seed, "profile/" + a.id, static_cast<std::uint64_t>(r));
      Rng rng = make_rng(s, "dBr");
      const double dBr = d.mean + d.sd * standard_normal(rng);
      const core::ProfileParams pr = core::profile_params(a.vs30, coeffs, dBr);
      const auto eps = geostat::sample_depth_residuals(mids, db.sill_s, db.range_r_m, total, s);
      std::vector<double> vs;
      for (std::size_t j = 0; j < mids.size(); ++j)
        vs.push_back(std::max(site::kMinRealizationVs, core::median_vs(mids[j], pr) * std::exp(eps[j])));
      core::LayeredProfile real = median.with_velocities(vs, core::Provenance::model_realization);
      const std::string rid = a.id + "_r" + zero_pad(static_cast<std::size_t>(r + 1), width);
      real.set_id(rid);
      write_text(c.out_dir / (rid + ".csv"), core::format_profiles({real}));
    }
    std::printf("%d realizations written to %s\n", a.realizations, c.out_dir.string().c_str());
  }
  return kOk;
}

// ---------------------------------------------------------------- grid

struct GridArgs {
  fs::path vs30_grid;
  fs::path background;
  std::vector<double> depths{10.0, 50.0, 100.0};
  std::string mode = "stationary";
  std::vector<double> region;  ///< lat_min lat_max lon_min lon_max
  std::string sd_method = "delta";
  int draws = 100;
};

int cmd_grid(const Common& c, const GridArgs& a) {
  if (a.vs30_grid.empty()) throw UsageError("grid needs --vs30-grid");
  const io::AsciiGrid vs30 = io::read_ascii_grid(a.vs30_grid);
  std::string kind_name = a.mode;
  std::replace(kind_name.begin(), kind_name.end(), '-', '_');
  const merge::SliceKind kind = merge::slice_kind_from_string(kind_name);
  const bool spatial = kind == merge::SliceKind::spatial_conditioned ||
                       kind == merge::SliceKind::spatial_unconditional;

  const core::CoefficientSet coeffs =
      load_coeffs(c.coeffs, spatial ? core::spatial_preset() : core::stationary_preset());
  std::optional<geostat::Kriger> kriger;
  std::optional<merge::BackgroundModel> bg;
  merge::SliceInputs in;
  in.vs30 = &vs30;
  in.coeffs = &coeffs;
  if (kind == merge::SliceKind::spatial_conditioned) {
    kriger.emplace(load_field(c, coeffs));
    in.kriger = &*kriger;
  }
  if (kind == merge::SliceKind::background) {
    if (a.background.empty()) throw UsageError("background mode needs --background");
    bg.emplace(merge::read_background(a.background));
    in.background = &*bg;
  }
  merge::Region region = merge::full_region(vs30);
  if (!a.region.empty()) {
    if (a.region.size() != 4) throw UsageError("--region takes lat_min lat_max lon_min lon_max");
    region = {a.region[0], a.region[1], a.region[2], a.region[3]};
  }
  merge::SliceOptions opts;
  opts.sd_method = a.sd_method == "monte-carlo" ? merge::SdMethod::monte_carlo : merge::SdMethod::delta;
  opts.draws = a.draws;
  opts.seed = derive_seed(c.seed, "grid");

  std::ostringstream manifest;
  manifest << "mode=" << a.mode << "\n";
  for (double z : a.depths) {
    const merge::Slice s = merge::grid_slice(region, z, kind, in, opts);
    const std::string tag = a.mode + "_" + io::fmt6(z) + "m";
    const fs::path mean_path = c.out_dir / ("vs_mean_" + tag + ".asc");
    write_text(mean_path, io::format_ascii_grid(s.vs_mean));
    manifest << mean_path.filename().string() << "\n";
    if (spatial) {
      const fs::path sd_path = c.out_dir / ("vs_sd_" + tag + ".asc");
      write_text(sd_path, io::format_ascii_grid(s.vs_sd));
      manifest << sd_path.filename().string() << "\n";
    }
  }
  write_text(c.out_dir / "manifest.txt", manifest.str());
  std::cout << manifest.str();
  return kOk;
}

// ---------------------------------------------------------------- merge

struct MergeArgs {
  fs::path profiles;
  fs::path background;
  fs::path background_profiles;
  std::string output = "merged_profiles.csv";
};

int cmd_merge(const Common& c, const MergeArgs& a) {
  if (a.profiles.empty()) throw UsageError("merge needs --profiles");
  if (a.background.empty() == a.background_profiles.empty())
    throw UsageError("merge needs exactly one of --background or --background-profiles");
  const auto svm = core::read_profiles(a.profiles);
  std::map<std::string, core::LayeredProfile> bg_by_id;
  std::optional<merge::BackgroundModel> bg;
  if (!a.background.empty()) bg.emplace(merge::read_background(a.background));
  else
    for (auto& p : core::read_profiles(a.background_profiles)) bg_by_id.emplace(p.id(), p);

  std::vector<core::LayeredProfile> out;
  for (const auto& p : svm) {
    core::LayeredProfile b;
    if (bg) {
      if (!p.location()) throw DataError("profile '" + p.id() + "' has no location");
      b = bg->profile_at(p.location()->lat, p.location()->lon, p.id());
    } else {
      const auto it = bg_by_id.find(p.id());
      if (it == bg_by_id.end()) throw DataError("no background profile with id '" + p.id() + "'");
      b = it->second;
    }
    out.push_back(merge::merge_profile(p, b));
  }
  const fs::path path = c.out_dir / a.output;
  write_text(path, core::format_profiles(out));
  std::printf("%zu merged profiles written to %s\n", out.size(), path.string().c_str());
  return kOk;
}

// ---------------------------------------------------------------- semivariogram

struct SemivariogramArgs {
  fs::path profiles;
  double bin_width = 2.0;
  double max_lag = 60.0;
  std::size_t min_pairs = 30;
};

int cmd_semivariogram(const Common& c, const SemivariogramArgs& a) {
  if (a.profiles.empty()) throw UsageError("semivariogram needs --profiles");
  const core::CoefficientSet coeffs = load_coeffs(c.coeffs, core::stationary_preset());
  const auto profiles = core::read_profiles(a.profiles);
  std::map<std::string, double> dBr;
  if (!c.field.empty()) {
    geostat::GpHyper h{coeffs.spatial ? coeffs.spatial->omega : 0.0, coeffs.spatial ? coeffs.spatial->ell_km : 1.0};
    for (const auto& p : geostat::read_spatial_field(c.field, h).points) dBr[p.id] = p.dBr_mean;
  }
  std::vector<geostat::ResidualProfile> res;
  for (const auto& p : profiles) {
    const double vs30 = core::time_averaged_vs(p, std::min(30.0, p.depth_m()));
    const auto it = dBr.find(p.id());
    const auto pp = core::profile_params(vs30, coeffs, it == dBr.end() ? 0.0 : it->second);
    geostat::ResidualProfile r;
    for (const auto& e : core::residuals(p, pp)) {
      r.depths_m.push_back(e.depth_m);
      r.eps.push_back(e.eps);
    }
    res.push_back(std::move(r));
  }
  const auto edges = geostat::uniform_bin_edges(a.bin_width, a.max_lag);
  geostat::Semivariogram emp = geostat::empirical_semivariogram(res, edges);
  emp.fitted = geostat::fit_semivariogram(emp, a.min_pairs);

  std::ostringstream csv;
  csv << "bin_lo_m,bin_hi_m,lag_m,gamma,pairs\n";
  for (std::size_t b = 0; b < emp.bins(); ++b)
    csv << io::fmt6(emp.edges[b]) << ',' << io::fmt6(emp.edges[b + 1]) << ',' << io::fmt6(emp.lags[b])
        << ',' << (emp.counts[b] ? io::fmt6(emp.gamma[b]) : std::string()) << ',' << emp.counts[b] << '\n';
  write_text(c.out_dir / "semivariogram.csv", csv.str());

  const auto& f = *emp.fitted;
  nlohmann::ordered_json j{{"range_r_m", f.range_r_m}, {"sill_s", f.sill_s}, {"se_r", f.se_r},
                           {"se_s", f.se_s},          {"iterations", f.iterations},
                           {"profiles", profiles.size()}};
  write_text(c.out_dir / "semivariogram_fit.json", j.dump(2) + "\n");
  // the curvature is singular when r collapses to zero (pure nugget)
  auto se = [](double v) {
    char s[32];
    if (std::isfinite(v)) std::snprintf(s, sizeof s, "%.4f", v);
    else std::snprintf(s, sizeof s, "n/a");
    return std::string(s);
  };
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-12s %12s %12s\n%-12s %12.4f %12s\n%-12s %12.4f %12s\n", "parameter",
                "value", "std.error", "r [m]", f.range_r_m, se(f.se_r).c_str(), "s", f.sill_s,
                se(f.se_s).c_str());
  std::cout << buf;
  write_text(c.out_dir / "semivariogram_summary.txt", buf);
  return kOk;
}

// ---------------------------------------------------------------- calibrate

struct CalibrateArgs {
  fs::path profiles;
  fs::path vs30_metadata;
  std::string model = "stationary";
  std::string vs30_source = "profile";
  int max_iter = 500;
  int restarts = 5;
};

std::map<std::string, double> read_vs30_metadata(const fs::path& path) {
  std::map<std::string, double> m;
  if (path.empty()) return m;
  const io::CsvTable t = io::read_csv(path);
  io::require_header(t, {"id", "vs30"}, path.string());
  for (std::size_t r = 0; r < t.rows.size(); ++r)
    m[t.rows[r][0]] = io::parse_double(t.rows[r][1], path.string() + ":" + std::to_string(t.line_numbers[r]));
  return m;
}

int cmd_calibrate(const Common& c, const CalibrateArgs& a) {
  if (a.profiles.empty()) throw UsageError("calibrate needs --profiles");
  const auto model = a.model == "spatial" ? calibrate::ModelKind::spatial : calibrate::ModelKind::stationary;
  const auto profiles = core::read_profiles(a.profiles);
  const auto source =
      a.vs30_source == "metadata" ? calibrate::Vs30Source::metadata : calibrate::Vs30Source::profile;
  if (source == calibrate::Vs30Source::metadata && a.vs30_metadata.empty())
    throw UsageError("--vs30-source metadata needs --vs30-metadata");
  const auto data = calibrate::prepare_dataset(profiles, read_vs30_metadata(a.vs30_metadata), source);
  core::CoefficientSet init = load_coeffs(c.coeffs, core::stationary_preset());
  init.spatial.reset();
  calibrate::FitOptions opts;
  opts.max_iter = a.max_iter;
  opts.restarts = a.restarts;
  opts.seed = derive_seed(c.seed, "calibrate");
  const calibrate::FitResult fit = calibrate::map_fit(data, calibrate::PriorSpec{}, model, init, opts);

  calibrate::write_fit(fit, c.out_dir / "fit.json");
  core::CoefficientSet out = fit.coeffs;
  out.depth = init.depth;
  core::save_coefficients(out, c.out_dir / "coefficients.json");
  const std::string summary = calibrate::format_fit_summary(fit);
  write_text(c.out_dir / "fit_summary.txt", summary);
  if (fit.field) write_text(c.out_dir / "field.csv", geostat::format_spatial_field(*fit.field));
  std::cout << summary;
  if (fit.status != calibrate::OptimStatus::converged)
    std::cerr << "warning: optimizer status " << calibrate::to_string(fit.status) << "\n";
  return kOk;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
  fs::path profiles;
  fs::path background;
  std::vector<std::string> modes{"stationary"};
  int realizations = 10;
  double scale = 1.2;
  int ensemble_count = 20;
  double f_lo = 0.1, f_hi = 10.0;
  double dt = 0.005, duration = 40.96;
  double damping = 0.02;
  double halfspace_vs = 1000.0;
};

int cmd_evaluate(const Common& c, const EvaluateArgs& a) {
  if (a.profiles.empty()) throw UsageError("evaluate needs --profiles");
  const auto refs = core::read_profiles(a.profiles);
  if (refs.empty()) throw DataError("no reference profiles");
  site::EnsembleSpec es;
  es.f_lo = a.f_lo;
  es.f_hi = a.f_hi;
  es.count = a.ensemble_count;
  es.dt = a.dt;
  es.duration = a.duration;
  const site::Ensemble ens = site::ensemble_input(es);
  site::EvaluateOptions opts;
  opts.column.damping = a.damping;
  opts.column.halfspace_min_vs = a.halfspace_vs;

  for (const auto& mode : a.modes) {
    const bool spatial = mode == "spatial";
    core::CoefficientSet coeffs =
        load_coeffs(c.coeffs, spatial ? core::spatial_preset() : core::stationary_preset());
    std::optional<geostat::Kriger> kriger;
    std::optional<merge::BackgroundModel> bg;
    site::CandidateGenerator gen;
    if (mode == "identity") gen = site::identity_candidates();
    else if (mode == "scaled") gen = site::scaled_candidates(a.scale);
    else if (mode == "stationary") gen = site::median_candidates(coeffs);
    else if (mode == "spatial") {
      kriger.emplace(load_field(c, coeffs));
      gen = site::median_candidates(coeffs, {}, &*kriger);
    } else if (mode == "realization") {
      gen = site::realization_candidates(coeffs, require_depth_block(coeffs), a.realizations,
                                         derive_seed(c.seed, "evaluate"));
    } else if (mode == "background") {
      if (a.background.empty()) throw UsageError("background mode needs --background");
      bg.emplace(merge::read_background(a.background));
      gen = site::background_candidates(&*bg);
    } else {
      throw UsageError("unknown mode '" + mode + "'");
    }
    const site::GofReport rep = site::evaluate_models(refs, gen, ens, opts, mode);
    for (const auto& d : rep.diagnostics) std::cerr << mode << ": " << d << "\n";
    if (rep.profiles.empty()) throw DataError("mode " + mode + ": no usable profile");
    write_text(c.out_dir / ("gof_" + mode + ".csv"), site::format_score_rows(rep));
    write_text(c.out_dir / ("gof_bins_" + mode + ".csv"), site::format_bin_rows(rep));

    std::ostringstream s;
    s << "mode " << mode << ": " << rep.profiles.size() << " profiles, " << rep.skipped << " skipped\n";
    static const char* bands[] = {"low", "mid", "high"};
    for (int b = 0; b < 3; ++b) {
      std::vector<double> v;
      for (const auto& p : rep.profiles)
        if (std::isfinite(p.aggregate[b])) v.push_back(p.aggregate[b]);
      double m = 0.0;
      for (double x : v) m += x;
      m = v.empty() ? std::nan("") : m / static_cast<double>(v.size());
      char buf[160];
      std::snprintf(buf, sizeof buf, "  %-5s mean %9.4f  p16 %9.4f  p84 %9.4f  n %zu\n", bands[b], m,
                    site::percentile(v, 0.16), site::percentile(v, 0.84), v.size());
      s << buf;
    }
    write_text(c.out_dir / ("gof_summary_" + mode + ".txt"), s.str());
    std::cout << s.str();
  }
  return kOk;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  calibrate::SynthLayout layout;
};

int cmd_synth(const Common& c, SynthArgs a) {
  const core::CoefficientSet theta = load_coeffs(c.coeffs, core::stationary_preset());
  const auto ds = calibrate::synth_dataset(theta, a.layout, derive_seed(c.seed, "synth"));
  write_text(c.out_dir / "synth_profiles.csv", core::format_profiles(ds.profiles));
  write_text(c.out_dir / "synth_truth.csv", geostat::format_spatial_field(ds.truth));
  std::ostringstream vs;
  vs << "id,vs30\n";
  for (std::size_t i = 0; i < ds.profiles.size(); ++i)
    vs << ds.profiles[i].id() << ',' << io::fmt_exact(ds.vs30[i]) << '\n';
  write_text(c.out_dir / "synth_vs30.csv", vs.str());
  std::printf("%zu synthetic profiles written to %s\n", ds.profiles.size(), c.out_dir.string().c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sedvel: Vs30-conditioned sedimentary velocity model tools"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML configuration file; command-line flags override its keys");

  Common c;
  app.add_option("--out-dir", c.out_dir, "Output directory")->capture_default_str();
  app.add_option("--seed", c.seed, "Base random seed (64-bit unsigned)")->capture_default_str();
  app.add_option("--threads", c.threads, "Maximum worker threads (0 = runtime default)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.add_option("--coeffs", c.coeffs,
                 "Coefficient JSON file, or preset:stationary|stationary-mean|spatial|spatial-mean");
  app.add_option("--field", c.field, "Spatial field CSV id,lat,lon,dBr_mean,dBr_sd (dBr in ln units)");
  app.add_option("--omega", c.omega, "Override GP marginal sd omega [ln units]");
  app.add_option("--ell", c.ell_km, "Override GP correlation length ell [km]");

  ProfileArgs pa;
  auto* profile = app.add_subcommand("profile", "Median profile and depth-variability realizations at a site");
  profile->add_option("--vs30", pa.vs30, "Time-averaged shear-wave velocity of the top 30 m [m/s]")
      ->required()
      ->check(CLI::PositiveNumber);
  profile->add_option("--lat", pa.lat, "Site latitude [deg]");
  profile->add_option("--lon", pa.lon, "Site longitude [deg]");
  profile->add_option("--mode", pa.mode, "Model mode")
      ->check(CLI::IsMember({"stationary", "spatial-conditioned", "spatial-unconditional"}))
      ->capture_default_str();
  profile->add_option("--depth", pa.depth, "Profile depth [m]")->check(CLI::PositiveNumber)->capture_default_str();
  profile->add_option("--realizations", pa.realizations, "Number of realizations with depth variability")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  profile->add_option("--total-var", pa.total_var,
                      "Total ln-residual variance [ln units^2]; default = sill (no per-profile offset)");
  profile->add_option("--id", pa.id, "Profile id used in file names")->capture_default_str();

  GridArgs ga;
  auto* grid = app.add_subcommand("grid", "Depth-slice rasters of the velocity model");
  grid->add_option("--vs30-grid", ga.vs30_grid, "Vs30 raster [m/s] in the plain-text grid format");
  grid->add_option("--depths", ga.depths, "Slice depths [m]")->check(CLI::PositiveNumber)->capture_default_str();
  grid->add_option("--mode", ga.mode, "Model kind")
      ->check(CLI::IsMember({"stationary", "spatial-conditioned", "spatial-unconditional", "background"}))
      ->capture_default_str();
  grid->add_option("--background", ga.background, "Background model CSV lat,lon,depth_m,vs_mps");
  grid->add_option("--region", ga.region, "lat_min lat_max lon_min lon_max [deg]")->expected(4);
  grid->add_option("--sd-method", ga.sd_method, "Propagation of dBr uncertainty")
      ->check(CLI::IsMember({"delta", "monte-carlo"}))
      ->capture_default_str();
  grid->add_option("--draws", ga.draws, "Monte Carlo draws per cell")->check(CLI::Range(2, 100000))->capture_default_str();

  MergeArgs ma;
  auto* merge_cmd = app.add_subcommand("merge", "Splice sedimentary profiles onto background columns");
  merge_cmd->add_option("--profiles", ma.profiles, "Sedimentary profiles CSV (vs in m/s, depths in m)");
  merge_cmd->add_option("--background", ma.background, "Background model CSV lat,lon,depth_m,vs_mps");
  merge_cmd->add_option("--background-profiles", ma.background_profiles,
                        "Background columns as a profiles CSV with matching ids");
  merge_cmd->add_option("--output", ma.output, "Output file name inside --out-dir")->capture_default_str();

  SemivariogramArgs sa;
  auto* semi = app.add_subcommand("semivariogram", "Along-depth semivariogram of ln-residuals");
  semi->add_option("--profiles", sa.profiles, "Measured profiles CSV (vs in m/s, depths in m)");
  semi->add_option("--bin-width", sa.bin_width, "Lag bin width [m]")->check(CLI::PositiveNumber)->capture_default_str();
  semi->add_option("--max-lag", sa.max_lag, "Largest lag [m]")->check(CLI::PositiveNumber)->capture_default_str();
  semi->add_option("--min-pairs", sa.min_pairs, "Minimum pairs per fitted bin")->capture_default_str();

  CalibrateArgs ca;
  auto* cal = app.add_subcommand("calibrate", "Penalized MAP calibration of the velocity model");
  cal->add_option("--profiles", ca.profiles, "Measured profiles CSV (vs in m/s, depths in m)");
  cal->add_option("--vs30-metadata", ca.vs30_metadata, "CSV id,vs30 [m/s] for profiles shallower than 30 m");
  cal->add_option("--vs30-source", ca.vs30_source,
                  "Vs30 [m/s] per profile: top 30 m of the profile, or the metadata file when listed")
      ->check(CLI::IsMember({"profile", "metadata"}))
      ->capture_default_str();
  cal->add_option("--model", ca.model, "Model")->check(CLI::IsMember({"stationary", "spatial"}))->capture_default_str();
  cal->add_option("--max-iter", ca.max_iter, "Quasi-Newton iteration limit")->check(CLI::NonNegativeNumber)->capture_default_str();
  cal->add_option("--restarts", ca.restarts, "Starting points (stationary model)")->check(CLI::PositiveNumber)->capture_default_str();

  EvaluateArgs ea;
  auto* ev = app.add_subcommand("evaluate", "Linear site-response goodness of fit against measured profiles");
  ev->add_option("--profiles", ea.profiles, "Reference profiles CSV (vs in m/s, depths in m)");
  ev->add_option("--background", ea.background, "Background model CSV lat,lon,depth_m,vs_mps");
  ev->add_option("--modes", ea.modes, "Candidate modes")
      ->check(CLI::IsMember({"identity", "scaled", "stationary", "spatial", "realization", "background"}))
      ->capture_default_str();
  ev->add_option("--realizations", ea.realizations, "Realizations per profile (realization mode)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  ev->add_option("--scale", ea.scale, "Velocity factor (scaled mode) [-]")->check(CLI::PositiveNumber)->capture_default_str();
  ev->add_option("--ensemble-count", ea.ensemble_count, "Ricker wavelets in the input ensemble")
      ->check(CLI::Range(2, 1000))
      ->capture_default_str();
  ev->add_option("--f-lo", ea.f_lo, "Lowest ensemble centre frequency [Hz]")->check(CLI::PositiveNumber)->capture_default_str();
  ev->add_option("--f-hi", ea.f_hi, "Highest ensemble centre frequency [Hz]")->check(CLI::PositiveNumber)->capture_default_str();
  ev->add_option("--dt", ea.dt, "Time step [s]")->check(CLI::PositiveNumber)->capture_default_str();
  ev->add_option("--duration", ea.duration, "Record length [s]")->check(CLI::PositiveNumber)->capture_default_str();
  ev->add_option("--damping", ea.damping, "Small-strain damping ratio [-]")->check(CLI::Range(0.0, 0.2))->capture_default_str();
  ev->add_option("--halfspace-vs", ea.halfspace_vs, "Minimum half-space velocity [m/s]")->check(CLI::PositiveNumber)->capture_default_str();

  SynthArgs ya;
  auto* syn = app.add_subcommand("synth", "Synthetic profile dataset drawn from the model");
  syn->add_option("--n", ya.layout.n_profiles, "Number of profiles")->check(CLI::PositiveNumber)->capture_default_str();
  syn->add_option("--vs30-min", ya.layout.vs30_min, "Lowest Vs30 [m/s]")->capture_default_str();
  syn->add_option("--vs30-max", ya.layout.vs30_max, "Highest Vs30 [m/s]")->capture_default_str();
  syn->add_option("--depth-min", ya.layout.depth_min_m, "Shallowest profile depth [m], >= 30")->capture_default_str();
  syn->add_option("--depth-max", ya.layout.depth_max_m, "Deepest profile depth [m]")->capture_default_str();
  syn->add_option("--lat-min", ya.layout.lat_min, "Extent south edge [deg]")->capture_default_str();
  syn->add_option("--lat-max", ya.layout.lat_max, "Extent north edge [deg]")->capture_default_str();
  syn->add_option("--lon-min", ya.layout.lon_min, "Extent west edge [deg]")->capture_default_str();
  syn->add_option("--lon-max", ya.layout.lon_max, "Extent east edge [deg]")->capture_default_str();
  syn->add_option("--top-thickness", ya.layout.rule.top_thickness_m, "First layer thickness [m]")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  syn->add_option("--growth", ya.layout.rule.growth, "Layer thickness growth factor [-], >= 1")->capture_default_str();
  syn->add_option("--max-thickness", ya.layout.rule.max_thickness_m, "Layer thickness cap [m]")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  if (c.threads > 0) omp_set_num_threads(c.threads);
  try {
    fs::create_directories(c.out_dir);
    if (*profile) return cmd_profile(c, pa);
    if (*grid) return cmd_grid(c, ga);
    if (*merge_cmd) return cmd_merge(c, ma);
    if (*semi) return cmd_semivariogram(c, sa);
    if (*cal) return cmd_calibrate(c, ca);
    if (*ev) return cmd_evaluate(c, ea);
    if (*syn) return cmd_synth(c, ya);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kData;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumerical;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kData;
  }
  return kUsage;
}
