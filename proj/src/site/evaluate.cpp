#include "sedvel/site/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sedvel/core/scaling.hpp"
#include "sedvel/errors.hpp"
#include "sedvel/geostat/depth_residuals.hpp"
#include "sedvel/io/csv.hpp"
#include "sedvel/merge/merge.hpp"
#include "sedvel/random.hpp"
#include "sedvel/site/spectral.hpp"

namespace sedvel::site {

namespace {

using BandIms = std::array<ImSet, 3>;

std::vector<BandIms> column_ims(const core::LayeredProfile& p, const Ensemble& ens,
                                const std::array<Band, 3>& bands, const EvaluateOptions& opt) {
  const MotionRecord& first = ens.members.front();
  const Spectrum tf =
      transfer_function(make_column(p, opt.column), fft_frequencies(first.acc.size(), first.dt));
  std::array<std::pair<double, double>, 3> bp;
  for (std::size_t b = 0; b < 3; ++b) bp[b] = {bands[b].f_lo, bands[b].f_hi};
  std::vector<BandIms> out;
  out.reserve(ens.members.size());
  for (const MotionRecord& m : ens.members) {
    const std::vector<MotionRecord> filtered = bandpass_many(propagate(m, tf), bp);
    BandIms ims;
    for (std::size_t b = 0; b < 3; ++b)
      ims[b] = intensity_measures(filtered[b], opt.psa_periods, opt.psa_damping);
    out.push_back(std::move(ims));
  }
  return out;
}

struct ProfileResult {
  bool ok = false;
  ProfileScore summary;
  std::vector<ScoreRow> rows;
  std::vector<std::string> diagnostics;
};

ProfileResult evaluate_one(const core::LayeredProfile& ref, const CandidateGenerator& gen,
                           const Ensemble& ens, const EvaluateOptions& opt) {
  ProfileResult r;
  r.summary.profile_id = ref.id();
  r.summary.vs30 = profile_vs30(ref);
  r.summary.fp = core::fp_quarter_wavelength(ref);
  const std::array<Band, 3> bands = fp_bands(r.summary.fp);
  const std::vector<core::LayeredProfile> cands = gen(ref);
  if (cands.empty()) throw DataError("no candidate column generated");

  const std::vector<BandIms> ref_ims = column_ims(ref, ens, bands, opt);
  std::array<std::array<double, kImCount>, 3> sum{};
  std::array<std::array<std::size_t, kImCount>, 3> count{};
  for (const auto& c : cands) {
    const std::vector<BandIms> c_ims = column_ims(c, ens, bands, opt);
    for (std::size_t m = 0; m < ref_ims.size(); ++m)
      for (std::size_t b = 0; b < 3; ++b) {
        const GofScores g = gof_score(ref_ims[m][b], c_ims[m][b], bands[b].f_lo, bands[b].f_hi);
        for (std::size_t i = 0; i < kImCount; ++i)
          if (g.valid[i]) {
            sum[b][i] += g.score[i];
            ++count[b][i];
          }
      }
  }
  for (std::size_t b = 0; b < 3; ++b) {
    double agg = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < kImCount; ++i) {
      if (count[b][i] == 0) {
        r.diagnostics.push_back(ref.id() + ": " + bands[b].name + " band " + to_string(kAllIms[i]) +
                                " could not be scored");
        continue;
      }
      const double s = sum[b][i] / static_cast<double>(count[b][i]);
      r.rows.push_back({ref.id(), r.summary.vs30, bands[b].name, kAllIms[i], s});
      agg += s;
      ++n;
    }
    r.summary.aggregate[b] = n ? agg / static_cast<double>(n) : std::nan("");
  }
  r.ok = true;
  return r;
}

core::ProfileParams params_at(const core::LayeredProfile& ref, const core::CoefficientSet& c,
                              const geostat::Kriger* kriger) {
  double dBr = 0.0;
  if (kriger != nullptr) {
    if (!ref.location()) throw DataError("profile " + ref.id() + " has no location for kriging");
    dBr = kriger->predict(kriger->field().projection.project(*ref.location())).mean;
  }
  return core::profile_params(profile_vs30(ref), c, dBr);
}

}  // namespace

double profile_vs30(const core::LayeredProfile& p) {
  return core::time_averaged_vs(p, std::min(30.0, p.depth_m()));
}

double percentile(std::vector<double> v, double q) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= v.size()) return v.back();
  const double w = pos - static_cast<double>(i);
  return (1.0 - w) * v[i] + w * v[i + 1];
}

std::vector<BinRow> bin_scores(std::span<const ProfileScore> profiles, std::span<const double> edges) {
  static const std::array<const char*, 3> names = {"low", "mid", "high"};
  std::vector<BinRow> out;
  for (std::size_t e = 0; e + 1 < edges.size(); ++e)
    for (std::size_t b = 0; b < 3; ++b) {
      std::vector<double> v;
      for (const auto& p : profiles)
        if (p.vs30 >= edges[e] && p.vs30 < edges[e + 1] && std::isfinite(p.aggregate[b]))
          v.push_back(p.aggregate[b]);
      if (v.empty()) continue;
      BinRow row;
      row.bin = io::fmt6(edges[e]) + "-" + io::fmt6(edges[e + 1]);
      row.band = names[b];
      double s = 0.0;
      for (double x : v) s += x;
      row.mean = s / static_cast<double>(v.size());
      row.p16 = percentile(v, 0.16);
      row.p84 = percentile(v, 0.84);
      row.n = v.size();
      out.push_back(std::move(row));
    }
  return out;
}

GofReport evaluate_models(std::span<const core::LayeredProfile> refs, const CandidateGenerator& gen,
                          const Ensemble& ens, const EvaluateOptions& opt, const std::string& mode) {
  if (ens.members.empty()) throw DomainError("input ensemble is empty");
  for (const auto& m : ens.members)
    if (m.dt != ens.members.front().dt || m.acc.size() != ens.members.front().acc.size())
      throw DomainError("ensemble members must share dt and length");
  const auto n = static_cast<std::ptrdiff_t>(refs.size());
  std::vector<ProfileResult> results(refs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      results[i] = evaluate_one(refs[i], gen, ens, opt);
    } catch (const std::exception& e) {
      results[i].ok = false;
      results[i].diagnostics = {refs[i].id() + ": skipped (" + e.what() + ")"};
    }
  }
  GofReport report;
  report.mode = mode;
  for (auto& r : results) {
    report.diagnostics.insert(report.diagnostics.end(), r.diagnostics.begin(), r.diagnostics.end());
    if (!r.ok) {
      ++report.skipped;
      continue;
    }
    report.rows.insert(report.rows.end(), r.rows.begin(), r.rows.end());
    report.profiles.push_back(r.summary);
  }
  report.bins = bin_scores(report.profiles, opt.vs30_bin_edges);
  return report;
}

CandidateGenerator identity_candidates() {
  return [](const core::LayeredProfile& ref) { return std::vector<core::LayeredProfile>{ref}; };
}

CandidateGenerator scaled_candidates(double factor) {
  if (!(factor > 0.0)) throw DomainError("scale factor must be positive");
  return [factor](const core::LayeredProfile& ref) {
    std::vector<double> vs;
    for (const auto& l : ref.layers()) vs.push_back(l.vs_mps * factor);
    return std::vector<core::LayeredProfile>{ref.with_velocities(vs, core::Provenance::model_median)};
  };
}

CandidateGenerator median_candidates(core::CoefficientSet coeffs, core::DiscretizationRule rule,
                                     const geostat::Kriger* kriger) {
  return [coeffs, rule, kriger](const core::LayeredProfile& ref) {
    core::LayeredProfile p = core::discretize(params_at(ref, coeffs, kriger), ref.depth_m(), rule);
    p.set_id(ref.id());
    p.set_location(ref.location());
    return std::vector<core::LayeredProfile>{std::move(p)};
  };
}

CandidateGenerator realization_candidates(core::CoefficientSet coeffs, core::DepthBlock depth,
                                          int count, std::uint64_t seed,
                                          core::DiscretizationRule rule,
                                          const geostat::Kriger* kriger) {
  if (count < 1) throw DomainError("realization count must be >= 1");
  return [=](const core::LayeredProfile& ref) {
    const core::LayeredProfile median =
        core::discretize(params_at(ref, coeffs, kriger), ref.depth_m(), rule);
    std::vector<double> mids;
    for (const auto& l : median.layers()) mids.push_back(l.mid_m());
    std::vector<core::LayeredProfile> out;
    for (int r = 0; r < count; ++r) {
      const std::vector<double> eps = geostat::sample_depth_residuals(
          mids, depth.sill_s, depth.range_r_m, depth.sill_s,
          derive_seed(seed, "realization/" + ref.id(), static_cast<std::uint64_t>(r)));
      std::vector<double> vs;
      for (std::size_t j = 0; j < mids.size(); ++j)
        vs.push_back(std::max(kMinRealizationVs, median.layers()[j].vs_mps * std::exp(eps[j])));
      core::LayeredProfile p = median.with_velocities(vs, core::Provenance::model_realization);
      p.set_id(ref.id());
      p.set_location(ref.location());
      out.push_back(std::move(p));
    }
    return out;
  };
}

CandidateGenerator background_candidates(const merge::BackgroundModel* model) {
  if (model == nullptr) throw DomainError("background mode needs a background model");
  return [model](const core::LayeredProfile& ref) {
    if (!ref.location()) throw DataError("profile " + ref.id() + " has no location");
    const core::LayeredProfile col = model->profile_at(ref.location()->lat, ref.location()->lon, ref.id());
    if (col.depth_m() < ref.depth_m()) throw DataError("background column is shallower than the profile");
    const std::vector<double> z = merge::union_interfaces(col, col, ref.depth_m());
    core::LayeredProfile p = merge::resample(col, z);
    p.set_location(ref.location());
    return std::vector<core::LayeredProfile>{std::move(p)};
  };
}

std::string format_score_rows(const GofReport& r) {
  std::ostringstream os;
  os << "# score=ln(model/reference) mode=" << (r.mode.empty() ? "-" : r.mode) << '\n';
  os << "profile_id,vs30,band,im,score\n";
  for (const auto& row : r.rows)
    os << row.profile_id << ',' << io::fmt6(row.vs30) << ',' << row.band << ',' << to_string(row.im)
       << ',' << io::fmt6(row.score) << '\n';
  return os.str();
}

std::string format_bin_rows(const GofReport& r) {
  std::ostringstream os;
  os << "# score=ln(model/reference) mode=" << (r.mode.empty() ? "-" : r.mode) << '\n';
  os << "vs30_bin,band,mean,p16,p84,n\n";
  for (const auto& b : r.bins)
    os << b.bin << ',' << b.band << ',' << io::fmt6(b.mean) << ',' << io::fmt6(b.p16) << ','
       << io::fmt6(b.p84) << ',' << b.n << '\n';
  return os.str();
}

}  // namespace sedvel::site
