#include <algorithm>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>
#include <omp.h>

#include "sedvel/errors.hpp"
#include "sedvel/geostat/depth_residuals.hpp"
#include "sedvel/geostat/kriging.hpp"
#include "sedvel/geostat/projection.hpp"
#include "sedvel/geostat/semivariogram.hpp"
#include "sedvel/geostat/spatial_field.hpp"
#include "sedvel/random.hpp"
#include "sedvel/reference/serial_kernels.hpp"
#include "support/generators.hpp"

using namespace sedvel;
using namespace sedvel::geostat;

namespace {

SpatialField random_field(Rng& rng, int n, double extent_km, double omega, double ell) {
  SpatialField f;
  f.hyper = {omega, ell};
  for (int i = 0; i < n; ++i) {
    f.points.push_back({"p" + std::to_string(i),
                        {gen::uniform(rng, 0.0, extent_km), gen::uniform(rng, 0.0, extent_km)},
                        gen::uniform(rng, -0.5, 0.5),
                        gen::uniform(rng, 0.0, 0.2)});
  }
  return f;
}

std::vector<ResidualProfile> synthetic_residuals(int n_profiles, double sill, double r,
                                                 double total, std::uint64_t seed) {
  std::vector<ResidualProfile> out;
  for (int p = 0; p < n_profiles; ++p) {
    ResidualProfile rp;
    for (double z = 0.5; z < 100.0; z += 1.0) rp.depths_m.push_back(z);
    rp.eps = sample_depth_residuals(rp.depths_m, sill, r, total, derive_seed(seed, "resid", p));
    out.push_back(std::move(rp));
  }
  return out;
}

}  // namespace

TEST(Kernel, Examples) {
  EXPECT_DOUBLE_EQ(spatial_kernel(0.0, 0.3, 2.0), 0.09);
  EXPECT_NEAR(spatial_kernel(2.0, 0.3, 2.0), 0.09 * std::exp(-1.0), 1e-15);
  // 0.00729 quoted to two figures; direct evaluation gives 0.0072714
  EXPECT_NEAR(spatial_kernel(5.0, 0.3156, 1.9104), 0.0072714, 1e-7);
  EXPECT_NEAR(spatial_kernel(5.0, 0.3156, 1.9104), 0.00729, 3e-5);
  EXPECT_THROW(spatial_kernel(-1.0, 0.3, 2.0), DomainError);
  EXPECT_THROW(spatial_kernel(1.0, 0.3, 0.0), DomainError);
}

TEST(Kernel, DecreasingInDistance) {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const double om = gen::uniform(rng, 0.01, 1.0), ell = gen::log_uniform(rng, 0.1, 50.0);
    const double d1 = gen::uniform(rng, 0.0, 100.0), d2 = d1 + gen::uniform(rng, 1e-3, 10.0);
    EXPECT_GE(spatial_kernel(d1, om, ell), spatial_kernel(d2, om, ell));
  }
}

TEST(Projection, RoundTripAndScale) {
  LocalProjection proj(34.0, -118.0);
  const core::Location loc{34.1, -117.9};
  const auto p = proj.project(loc);
  const auto back = proj.unproject(p);
  EXPECT_NEAR(back.lat, loc.lat, 1e-12);
  EXPECT_NEAR(back.lon, loc.lon, 1e-12);
  // 0.1 degree of latitude
  EXPECT_NEAR(p.y_km, kEarthRadiusKm * 0.1 * M_PI / 180.0, 1e-9);
}

TEST(Kriging, SinglePointClosedForm) {
  const double omega = 0.3, ell = 2.0;
  SpatialField f;
  f.hyper = {omega, ell};
  f.points.push_back({"a", {0.0, 0.0}, 0.4, 0.0});
  Kriger k(f);
  const auto pr = k.predict(PlanePoint{ell, 0.0});
  EXPECT_NEAR(pr.mean, 0.4 * std::exp(-1.0), 1e-7);
  EXPECT_NEAR(pr.sd, omega * std::sqrt(1.0 - std::exp(-2.0)), 1e-7);
}

TEST(Kriging, TrainingPointAndFarFieldLimits) {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    SpatialField f = random_field(rng, 15, 20.0, 0.3156, 1.91);
    for (auto& p : f.points) p.dBr_sd = 0.0;
    Kriger k(f);
    for (const auto& p : f.points) {
      const auto pr = k.predict(p.xy);
      EXPECT_NEAR(pr.mean, p.dBr_mean, 1e-9);
      EXPECT_NEAR(pr.sd, 0.0, 1e-3);  // jitter-limited
    }
    const auto far = k.predict(PlanePoint{1000.0 * 1.91, -500.0});
    EXPECT_LE(std::abs(far.mean), 1e-6);
    EXPECT_NEAR(far.sd, 0.3156, 1e-6);
  }
}

TEST(Kriging, MeanIsLinearInTrainingValues) {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    SpatialField a = random_field(rng, 12, 15.0, 0.4, 3.0);
    SpatialField b = a, sum = a;
    const double ca = gen::uniform(rng, -2.0, 2.0), cb = gen::uniform(rng, -2.0, 2.0);
    for (std::size_t i = 0; i < a.points.size(); ++i) {
      b.points[i].dBr_mean = gen::uniform(rng, -0.5, 0.5);
      sum.points[i].dBr_mean = ca * a.points[i].dBr_mean + cb * b.points[i].dBr_mean;
    }
    Kriger ka(a), kb(b), ks(sum);
    for (int q = 0; q < 10; ++q) {
      const PlanePoint x{gen::uniform(rng, -5.0, 20.0), gen::uniform(rng, -5.0, 20.0)};
      const auto pa = ka.predict(x), pb = kb.predict(x), ps = ks.predict(x);
      EXPECT_NEAR(ps.mean, ca * pa.mean + cb * pb.mean, 1e-9);
      EXPECT_NEAR(ps.sd, pa.sd, 1e-12);
    }
  }
}

TEST(Kriging, SdBoundedByOmega) {
  Rng rng(23);
  SpatialField f = random_field(rng, 30, 10.0, 0.25, 2.0);
  Kriger k(f);
  for (int q = 0; q < 200; ++q) {
    const auto pr = k.predict(PlanePoint{gen::uniform(rng, -10.0, 20.0), gen::uniform(rng, -10.0, 20.0)});
    EXPECT_GE(pr.sd, 0.0);
    EXPECT_LE(pr.sd, 0.25 + 1e-12);
  }
}

TEST(Kriging, CoincidentPointsWithDifferentMeansRejected) {
  SpatialField f;
  f.hyper = {0.3, 2.0};
  f.points.push_back({"a", {1.0, 1.0}, 0.1, 0.0});
  f.points.push_back({"b", {1.0, 1.0}, 0.2, 0.0});
  EXPECT_THROW(Kriger{f}, DataError);
}

TEST(Kriging, CoincidentDuplicateNeedsOnlyJitter) {
  SpatialField f;
  f.hyper = {0.3, 2.0};
  f.points.push_back({"a", {1.0, 1.0}, 0.1, 0.0});
  f.points.push_back({"b", {1.0, 1.0}, 0.1, 0.0});
  Kriger k(f);
  EXPECT_GT(k.jitter(), 0.0);
  EXPECT_NEAR(k.predict(PlanePoint{1.0, 1.0}).mean, 0.1, 1e-6);
}

TEST(Kriging, KernelMatrixSymmetricPositiveDefinite) {
  Rng rng(29);
  SpatialField f = random_field(rng, 40, 30.0, 0.3, 1.9);
  std::vector<PlanePoint> pts;
  for (const auto& p : f.points) pts.push_back(p.xy);
  const Eigen::MatrixXd K = kernel_matrix(pts, 0.3, 1.9);
  EXPECT_LT((K - K.transpose()).norm(), 1e-14);
  Eigen::LLT<Eigen::MatrixXd> llt(K + 1e-8 * Eigen::MatrixXd::Identity(K.rows(), K.cols()));
  EXPECT_EQ(llt.info(), Eigen::Success);
}

TEST(Kriging, ParallelMatchesSerialAtAnyThreadCount) {
  Rng rng(31);
  SpatialField f = random_field(rng, 50, 20.0, 0.3, 2.0);
  Kriger k(f);
  std::vector<PlanePoint> q;
  for (int i = 0; i < 500; ++i) q.push_back({gen::uniform(rng, 0.0, 20.0), gen::uniform(rng, 0.0, 20.0)});
  const auto ref = reference::krige_serial(k, q);
  for (int threads : {1, 4}) {
    omp_set_num_threads(threads);
    const auto par = k.predict(q);
    ASSERT_EQ(par.size(), ref.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
      EXPECT_EQ(par[i].mean, ref[i].mean);
      EXPECT_EQ(par[i].sd, ref[i].sd);
    }
  }
}

TEST(SpatialFieldIo, RoundTripAndValidation) {
  const std::string text =
      "id,lat,lon,dBr_mean,dBr_sd\n"
      "a,34.000000,-118.000000,0.1,0.05\n"
      "b,34.050000,-118.020000,-0.2,0.1\n"
      "c,34.020000,-117.950000,0,0\n";
  const auto f = parse_spatial_field(text, {0.3, 2.0});
  ASSERT_EQ(f.points.size(), 3u);
  EXPECT_EQ(f.points[1].id, "b");
  EXPECT_DOUBLE_EQ(f.points[1].dBr_mean, -0.2);
  const auto again = parse_spatial_field(format_spatial_field(f), {0.3, 2.0});
  ASSERT_EQ(again.points.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(again.points[i].xy.x_km, f.points[i].xy.x_km, 1e-3);
    EXPECT_NEAR(again.points[i].xy.y_km, f.points[i].xy.y_km, 1e-3);
    EXPECT_DOUBLE_EQ(again.points[i].dBr_sd, f.points[i].dBr_sd);
  }
  EXPECT_THROW(parse_spatial_field("id,lat,lon,dBr_mean,dBr_sd\na,34,-118,0.1,-1\n", {0.3, 2.0}),
               DataError);
  EXPECT_THROW(parse_spatial_field("id,lat,lon\na,34,-118\n", {0.3, 2.0}), DataError);
  EXPECT_THROW(parse_spatial_field(text, {0.3, 0.0}), DataError);
}

TEST(DepthResiduals, ZeroVarianceGivesZeros) {
  const std::vector<double> z{1.0, 2.0, 5.0, 10.0};
  for (double e : sample_depth_residuals(z, 0.0, 10.0, 0.0, 3)) EXPECT_EQ(e, 0.0);
}

TEST(DepthResiduals, DomainErrors) {
  const std::vector<double> z{1.0, 2.0};
  EXPECT_THROW(sample_depth_residuals(z, 0.1, 10.0, 0.05, 1), DomainError);
  EXPECT_THROW(sample_depth_residuals(z, 0.1, 0.0, 0.1, 1), DomainError);
  EXPECT_THROW(sample_depth_residuals(z, -0.1, 10.0, 0.1, 1), DomainError);
}

TEST(DepthResiduals, DeterministicForSeed) {
  const std::vector<double> z{0.5, 1.5, 4.0, 9.0, 20.0};
  EXPECT_EQ(sample_depth_residuals(z, 0.06, 12.0, 0.08, 99),
            sample_depth_residuals(z, 0.06, 12.0, 0.08, 99));
  EXPECT_NE(sample_depth_residuals(z, 0.06, 12.0, 0.08, 99),
            sample_depth_residuals(z, 0.06, 12.0, 0.08, 100));
}

TEST(DepthResiduals, SingleDepthVariance) {
  const std::vector<double> z{10.0};
  const double total = 0.2807 * 0.2807;
  double s = 0.0, s2 = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const double e = sample_depth_residuals(z, 0.0607, 11.98, total, derive_seed(7, "var", i))[0];
    s += e;
    s2 += e * e;
  }
  const double var = s2 / n - (s / n) * (s / n);
  EXPECT_NEAR(var, 0.0788, 0.003);
}

TEST(DepthResiduals, TwoDepthCorrelation) {
  const std::vector<double> z{5.0, 16.98};
  const int n = 10000;
  double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
  for (int i = 0; i < n; ++i) {
    const auto e = sample_depth_residuals(z, 0.0607, 11.98, 0.0607, derive_seed(8, "corr", i));
    sa += e[0];
    sb += e[1];
    saa += e[0] * e[0];
    sbb += e[1] * e[1];
    sab += e[0] * e[1];
  }
  const double ma = sa / n, mb = sb / n;
  const double corr = (sab / n - ma * mb) / std::sqrt((saa / n - ma * ma) * (sbb / n - mb * mb));
  EXPECT_NEAR(corr, std::exp(-1.0), 0.02);
}

TEST(DepthResiduals, SampleCovarianceConverges) {
  const std::vector<double> z{0.5, 2.0, 4.5, 9.0, 15.0, 27.0, 40.0};
  const double sill = 0.0607, r = 11.98;
  const int n = 20000;
  const auto d = static_cast<Eigen::Index>(z.size());
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
  for (int i = 0; i < n; ++i) {
    const auto e = sample_depth_residuals(z, sill, r, sill, derive_seed(9, "frob", i));
    const Eigen::Map<const Eigen::VectorXd> v(e.data(), d);
    mean += v;
    acc += v * v.transpose();
  }
  mean /= n;
  const Eigen::MatrixXd cov = acc / n - mean * mean.transpose();
  const Eigen::MatrixXd target = depth_covariance(z, sill, r);
  EXPECT_LT((cov - target).norm() / target.norm(), 0.10);
}

TEST(Semivariogram, ConstantResidualsGiveZero) {
  std::vector<ResidualProfile> ps(3);
  for (auto& p : ps) {
    for (double z = 1.0; z < 50.0; z += 1.0) p.depths_m.push_back(z);
    p.eps.assign(p.depths_m.size(), 0.3);
  }
  const auto sv = empirical_semivariogram(ps, uniform_bin_edges());
  for (std::size_t b = 0; b < sv.bins(); ++b) {
    if (sv.counts[b] > 0) EXPECT_EQ(sv.gamma[b], 0.0);
  }
}

TEST(Semivariogram, EmptyBinsAreNaN) {
  std::vector<ResidualProfile> ps(1);
  ps[0].depths_m = {0.0, 1.0};
  ps[0].eps = {0.0, 1.0};
  const auto sv = empirical_semivariogram(ps, uniform_bin_edges(2.0, 10.0));
  EXPECT_EQ(sv.counts[0], 1u);
  EXPECT_DOUBLE_EQ(sv.gamma[0], 0.5);
  for (std::size_t b = 1; b < sv.bins(); ++b) {
    EXPECT_EQ(sv.counts[b], 0u);
    EXPECT_TRUE(std::isnan(sv.gamma[b]));
  }
}

TEST(Semivariogram, PureNuggetLimit) {
  Rng rng(41);
  const double v = 0.05;
  std::vector<ResidualProfile> ps(200);
  for (auto& p : ps) {
    for (double z = 0.5; z < 60.0; z += 1.0) {
      p.depths_m.push_back(z);
      p.eps.push_back(std::sqrt(v) * standard_normal(rng));
    }
  }
  const auto sv = empirical_semivariogram(ps, uniform_bin_edges());
  for (std::size_t b = 0; b < sv.bins(); ++b) {
    if (sv.counts[b] > 2000) EXPECT_NEAR(sv.gamma[b], v, 0.1 * v);
  }
}

TEST(Semivariogram, ExponentialRoundTripPerBin) {
  const auto ps = synthetic_residuals(200, 0.082, 11.93, 0.082, 2024);
  const auto sv = empirical_semivariogram(ps, uniform_bin_edges());
  for (std::size_t b = 0; b < sv.bins(); ++b) {
    if (sv.counts[b] < 30) continue;
    const double expect = exponential_semivariogram(sv.lags[b], 11.93, 0.082);
    EXPECT_NEAR(sv.gamma[b], expect, 0.10 * expect) << "bin " << b;
  }
}

TEST(Semivariogram, InvariantToProfileOrderAndOffsets) {
  auto ps = synthetic_residuals(20, 0.082, 11.93, 0.14, 3);
  const auto a = empirical_semivariogram(ps, uniform_bin_edges());
  std::reverse(ps.begin(), ps.end());
  for (auto& e : ps[4].eps) e += 1.7;
  const auto b = empirical_semivariogram(ps, uniform_bin_edges());
  for (std::size_t i = 0; i < a.bins(); ++i) {
    EXPECT_EQ(a.counts[i], b.counts[i]);
    if (a.counts[i] > 0) EXPECT_NEAR(a.gamma[i], b.gamma[i], 1e-12);
  }
}

TEST(Semivariogram, ParallelMatchesSerial) {
  const auto ps = synthetic_residuals(60, 0.082, 11.93, 0.1, 77);
  const auto edges = uniform_bin_edges();
  const auto ref = reference::empirical_semivariogram_serial(ps, edges);
  for (int threads : {1, 4}) {
    omp_set_num_threads(threads);
    const auto par = empirical_semivariogram(ps, edges);
    EXPECT_EQ(par.counts, ref.counts);
    for (std::size_t i = 0; i < ref.bins(); ++i) {
      if (ref.counts[i] > 0) EXPECT_EQ(par.gamma[i], ref.gamma[i]);
    }
  }
}

TEST(SemivariogramFit, ExactModelFamily) {
  Semivariogram sv;
  sv.edges = uniform_bin_edges();
  for (std::size_t b = 0; b + 1 < sv.edges.size(); ++b) {
    const double h = 0.5 * (sv.edges[b] + sv.edges[b + 1]);
    sv.lags.push_back(h);
    sv.gamma.push_back(exponential_semivariogram(h, 11.93, 0.082));
    sv.counts.push_back(100 + 10 * b);
  }
  const auto fit = fit_semivariogram(sv);
  EXPECT_NEAR(fit.range_r_m, 11.93, 1e-6);
  EXPECT_NEAR(fit.sill_s, 0.082, 1e-6);

  Semivariogram scaled = sv;
  for (auto& g : scaled.gamma) g *= 3.0;
  const auto fs = fit_semivariogram(scaled);
  EXPECT_NEAR(fs.sill_s, 3.0 * fit.sill_s, 1e-6);
  EXPECT_NEAR(fs.range_r_m, fit.range_r_m, 1e-6);
}

TEST(SemivariogramFit, MonteCarloRecovery) {
  const auto ps = synthetic_residuals(200, 0.082, 11.93, 0.082, 2024);
  const auto fit = fit_semivariogram(empirical_semivariogram(ps, uniform_bin_edges()));
  EXPECT_NEAR(fit.range_r_m, 11.93, 0.15 * 11.93);
  EXPECT_NEAR(fit.sill_s, 0.082, 0.10 * 0.082);
  EXPECT_GT(fit.se_r, 0.0);
  EXPECT_GT(fit.se_s, 0.0);
}

TEST(SemivariogramFit, TooFewBinsRejected) {
  Semivariogram sv;
  sv.edges = {0.0, 2.0, 4.0, 6.0};
  sv.lags = {1.0, 3.0, 5.0};
  sv.gamma = {0.01, 0.02, 0.03};
  sv.counts = {100, 100, 100};
  EXPECT_THROW(fit_semivariogram(sv), DataError);
}
