#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sedvel/core/coefficients.hpp"
#include "sedvel/core/profile.hpp"
#include "sedvel/geostat/kriging.hpp"
#include "sedvel/merge/background.hpp"
#include "sedvel/site/gof.hpp"
#include "sedvel/site/ricker.hpp"
#include "sedvel/site/transfer.hpp"

namespace sedvel::site {

struct EvaluateOptions {
  ColumnOptions column;
  std::vector<double> psa_periods = default_psa_periods();
  double psa_damping = 0.05;
  std::vector<double> vs30_bin_edges = {100, 200, 300, 400, 600, 800, 1200};
};

/// Candidate columns for one reference profile. Scores are averaged over the
/// returned columns. Throwing skips the profile.
using CandidateGenerator =
    std::function<std::vector<core::LayeredProfile>(const core::LayeredProfile& reference)>;

struct ScoreRow {
  std::string profile_id;
  double vs30 = 0.0;
  std::string band;
  Im im = Im::pga;
  double score = 0.0;
};

struct ProfileScore {
  std::string profile_id;
  double vs30 = 0.0;
  double fp = 0.0;
  std::array<double, 3> aggregate{};  ///< per band
};

struct BinRow {
  std::string bin;
  std::string band;
  double mean = 0.0;
  double p16 = 0.0;
  double p84 = 0.0;
  std::size_t n = 0;
};

struct GofReport {
  std::string mode;
  std::vector<ScoreRow> rows;
  std::vector<ProfileScore> profiles;
  std::vector<BinRow> bins;
  std::vector<std::string> diagnostics;
  std::size_t skipped = 0;
};

/// Runs every reference column and its candidates through the ensemble,
/// band-passes the surface motions to the reference's fP bands and scores
/// candidate against reference. Parallel over profiles; output order is the
/// input order regardless of scheduling.
GofReport evaluate_models(std::span<const core::LayeredProfile> references,
                          const CandidateGenerator& candidates, const Ensemble& ensemble,
                          const EvaluateOptions& options = {}, const std::string& mode = "");

/// 30 m time-averaged velocity, or the full-depth average for shallower columns.
double profile_vs30(const core::LayeredProfile& p);

/// Linear-interpolation percentile (q in [0, 1]) of unsorted values.
double percentile(std::vector<double> values, double q);

/// Bin statistics of the per-profile band aggregates.
std::vector<BinRow> bin_scores(std::span<const ProfileScore> profiles, std::span<const double> edges);

// Candidate generators.

CandidateGenerator identity_candidates();
CandidateGenerator scaled_candidates(double factor);

/// Median of the model for the reference's Vs30, discretized to the
/// reference's depth. With a kriger the slope adjustment is the kriged mean
/// at the reference location (which must then be present).
CandidateGenerator median_candidates(core::CoefficientSet coeffs, core::DiscretizationRule rule = {},
                                     const geostat::Kriger* kriger = nullptr);

/// `count` realizations of median x exp(eps(z)) with along-depth residuals
/// (sill, range from `depth`, total variance = sill). Velocities are clamped
/// to >= 50 m/s. Streams are seeded by (seed, profile id, index).
CandidateGenerator realization_candidates(core::CoefficientSet coeffs, core::DepthBlock depth,
                                          int count, std::uint64_t seed,
                                          core::DiscretizationRule rule = {},
                                          const geostat::Kriger* kriger = nullptr);

/// Background column at the reference location, cut at the reference depth.
CandidateGenerator background_candidates(const merge::BackgroundModel* model);

inline constexpr double kMinRealizationVs = 50.0;

std::string format_score_rows(const GofReport& r);
std::string format_bin_rows(const GofReport& r);

}  // namespace sedvel::site
