#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "sedvel/errors.hpp"

namespace sedvel::geostat {

/// ln-residuals of one profile, depth-sorted.
struct ResidualProfile {
  std::vector<double> depths_m;
  std::vector<double> eps;
};

struct SemivariogramFit {
  double range_r_m = 0.0;
  double sill_s = 0.0;
  double se_r = 0.0;
  double se_s = 0.0;
  int iterations = 0;
};

/// Binned within-profile semivariogram. Empty bins carry count 0 and NaN gamma.
struct Semivariogram {
  std::vector<double> edges;  ///< bin edges, size = bins + 1
  std::vector<double> lags;   ///< mean pair separation per bin (bin centre if empty)
  std::vector<double> gamma;
  std::vector<std::size_t> counts;
  std::optional<SemivariogramFit> fitted;

  std::size_t bins() const { return gamma.size(); }
};

/// Uniform edges 0, width, 2 width, ... up to max_lag.
std::vector<double> uniform_bin_edges(double width_m = 2.0, double max_lag_m = 60.0);

/// gamma(h) = mean over within-profile pairs in the bin of (eps_i - eps_j)^2 / 2.
/// Pairs never span profiles. Parallel over profiles; partial sums are
/// reduced in profile order so the result does not depend on thread count.
Semivariogram empirical_semivariogram(std::span<const ResidualProfile> profiles,
                                      std::span<const double> bin_edges);

/// s (1 - exp(-h / r)).
double exponential_semivariogram(double h, double range_r_m, double sill_s);

class SemivariogramFitError : public NumericalError {
 public:
  SemivariogramFitError(const std::string& what, SemivariogramFit last)
      : NumericalError(what), last_(last) {}
  const SemivariogramFit& last_iterate() const { return last_; }

 private:
  SemivariogramFit last_;
};

/// Pair-count weighted least squares of the exponential model over bins with
/// at least min_pairs pairs (Levenberg-Marquardt in log parameters). Standard
/// errors come from the Gauss-Newton curvature at the optimum.
SemivariogramFit fit_semivariogram(const Semivariogram& emp, std::size_t min_pairs = 30,
                                   int max_iter = 200);

}  // namespace sedvel::geostat
