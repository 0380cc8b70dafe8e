#include <cmath>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "sedvel/core/coefficients.hpp"
#include "sedvel/core/profile.hpp"
#include "sedvel/core/profile_io.hpp"
#include "sedvel/core/scaling.hpp"
#include "sedvel/errors.hpp"
#include "support/generators.hpp"
#include "support/quadrature.hpp"

using namespace sedvel;
using namespace sedvel::core;

namespace {

const CoefficientSet kTab1 = stationary_preset();

using oracle::continuous_vs30;
using oracle::vs0_by_quadrature;

}  // namespace

TEST(Scaling, Vs30ScaledExamples) {
  EXPECT_NEAR(vs30_scaled(std::exp(6.4990), kTab1), 0.0, 1e-12);
  EXPECT_NEAR(vs30_scaled(std::exp(6.4990 + 0.4354), kTab1), 1.0, 1e-12);
  EXPECT_NEAR(vs30_scaled(200.0, kTab1), -2.758, 5e-4);
  EXPECT_THROW(vs30_scaled(0.0, kTab1), DomainError);
  EXPECT_THROW(vs30_scaled(-10.0, kTab1), DomainError);
}

TEST(Scaling, CurvatureExamples) {
  EXPECT_NEAR(n_of_vs30(std::exp(6.4990), kTab1), 4.53705, 1e-5);
  EXPECT_NEAR(n_of_vs30(1e-3, kTab1), 1.0, 1e-6);
  EXPECT_NEAR(n_of_vs30(1e6, kTab1), 1.0 + 7.0741, 1e-6);
  EXPECT_NEAR(n_of_vs30(1e4, kTab1) / 8.0741, 1.0, 0.01);
}

TEST(Scaling, SlopeExamples) {
  EXPECT_NEAR(k_of_vs30(1e-3, kTab1), std::exp(-2.2986), 1e-6);
  EXPECT_NEAR(k_of_vs30(50.0, kTab1) / 0.1003, 1.0, 0.02);
  for (double v : {80.0, 300.0, 900.0, 2500.0})
    EXPECT_NEAR(k_of_vs30(v, kTab1, std::log(2.0)) / k_of_vs30(v, kTab1), 2.0, 1e-12);
  EXPECT_NEAR(k_of_vs30(std::exp(6.4990), kTab1), std::exp(0.51698), 1e-4);
  EXPECT_NEAR(k_of_vs30(std::exp(6.4990), kTab1), 1.677, 1e-3);
}

TEST(Scaling, HighVs30LogLogSlopeTendsToR3) {
  const double a = 1e8, b = 1.01e8;
  const double slope = std::log(k_of_vs30(b, kTab1) / k_of_vs30(a, kTab1)) / std::log(b / a);
  EXPECT_NEAR(slope, kTab1.r3, 1e-6);
}

TEST(Scaling, StableSigmoidAndSoftplus) {
  EXPECT_DOUBLE_EQ(sigmoid(0.0), 0.5);
  EXPECT_DOUBLE_EQ(softplus(0.0), std::log(2.0));
  EXPECT_EQ(sigmoid(-1000.0), 0.0);
  EXPECT_EQ(sigmoid(1000.0), 1.0);
  EXPECT_DOUBLE_EQ(softplus(1000.0), 1000.0);
  EXPECT_GT(softplus(-700.0), 0.0);
  EXPECT_NEAR(softplus(-30.0), std::exp(-30.0), 1e-25);
  EXPECT_TRUE(std::isfinite(n_of_vs30(1e300, kTab1)));
}

TEST(SurfaceVelocity, LinearBranchClosedForm) {
  const double expected = 300.0 * (2.5 + 10.0 * std::log(1.0 + 0.1 * 27.5)) / 30.0;
  EXPECT_NEAR(vs0_of(300.0, 0.1, 1.0), expected, 1e-9);
  EXPECT_NEAR(vs0_of(300.0, 0.1, 1.0), 157.2, 0.2);
}

TEST(SurfaceVelocity, ConvexBranchMatchesQuadratureOracle) {
  const double oracle = vs0_by_quadrature(500.0, 1.0, 4.0);
  EXPECT_NEAR(vs0_of(500.0, 1.0, 4.0) / oracle, 1.0, 1e-8);
  EXPECT_NEAR(vs0_of(500.0, 1.0, 4.0), 293.552079, 1e-6);
}

TEST(SurfaceVelocity, QuadratureGrid) {
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) {
      const double k = std::exp(std::log(1e-3) + (std::log(20.0) - std::log(1e-3)) * i / 19.0);
      const double n = 1.0 + 9.0 * j / 19.0;
      ASSERT_NEAR(vs0_of(400.0, k, n) / vs0_by_quadrature(400.0, k, n), 1.0, 1e-8) << k << " " << n;
    }
}

TEST(SurfaceVelocity, LimitsAndErrors) {
  EXPECT_NEAR(vs0_of(350.0, 1e-12, 3.0), 350.0, 1e-6);
  EXPECT_NEAR(vs0_of(350.0, 1e-12, 1.0), 350.0, 1e-6);
  EXPECT_THROW(vs0_of(350.0, 0.0, 2.0), DomainError);
  EXPECT_THROW(vs0_of(350.0, 0.1, 0.99), DomainError);
  EXPECT_THROW(vs0_of(0.0, 0.1, 2.0), DomainError);
}

TEST(SurfaceVelocity, ContinuousThroughLinearBranch) {
  for (double v : {120.0, 400.0, 1500.0})
    for (double k : {1e-3, 0.05, 0.5, 5.0}) {
      const double a = vs0_of(v, k, 1.0 + 1e-8), b = vs0_of(v, k, 1.0);
      EXPECT_LT(std::abs(a - b) / b, 1e-5);
    }
}

TEST(SurfaceVelocity, DerivativeMatchesFiniteDifference) {
  Rng rng(7);
  for (int i = 0; i < 50; ++i) {
    const double k = gen::log_uniform(rng, 1e-3, 10.0);
    const double n = gen::uniform(rng, 1.0, 8.0);
    const double h = 1e-5;
    const double fd = (std::log(vs0_of(300.0, k * std::exp(h), n)) -
                       std::log(vs0_of(300.0, k * std::exp(-h), n))) / (2.0 * h);
    EXPECT_NEAR(dln_vs0_dln_k(k, n), fd, 1e-6);
  }
}

TEST(MedianProfile, Examples) {
  ProfileParams p{300.0, 0.1, 1.0, 157.2, 0.0};
  EXPECT_DOUBLE_EQ(median_vs(0.0, p), 157.2);
  EXPECT_DOUBLE_EQ(median_vs(2.5, p), 157.2);
  EXPECT_NEAR(median_vs(12.5, p), 314.4, 1e-9);
  EXPECT_THROW(median_vs(-1.0, p), DomainError);
}

TEST(MedianProfile, Vs30RoundTripProperty) {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const double vs30 = gen::uniform(rng, 100.0, 1800.0);
    const ProfileParams p = profile_params(vs30, kTab1);
    ASSERT_NEAR(continuous_vs30(p) / vs30, 1.0, 1e-6) << vs30;
    ASSERT_LE(p.vs0, vs30);
  }
}

TEST(MedianProfile, MonotonicityProperties) {
  Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const CoefficientSet c = gen::random_coeffs(rng);
    const double vs30 = gen::log_uniform(rng, 80.0, 2000.0);
    const ProfileParams p = profile_params(vs30, c);
    double prev = 0.0;
    for (double z = 0.0; z <= 200.0; z += 0.7) {
      const double v = median_vs(z, p);
      ASSERT_GE(v, prev);
      prev = v;
    }
    const double v2 = vs30 * gen::uniform(rng, 1.001, 1.5);
    EXPECT_LT(k_of_vs30(vs30, c), k_of_vs30(v2, c));
    EXPECT_LT(n_of_vs30(vs30, c), n_of_vs30(v2, c));
    EXPECT_LT(vs0_of(vs30, 0.3, 2.0), vs0_of(v2, 0.3, 2.0));
  }
}

TEST(MedianProfile, SurfaceVelocityRatioBand) {
  for (double vs30 = 150.0; vs30 <= 1000.0; vs30 += 10.0) {
    const double ratio = vs30 / profile_params(vs30, kTab1).vs0;
    EXPECT_GE(ratio, 1.5) << vs30;
    EXPECT_LE(ratio, 2.6) << vs30;
  }
}

TEST(MedianProfile, SlopeSensitivityMatchesFiniteDifference) {
  Rng rng(13);
  for (int i = 0; i < 40; ++i) {
    const double vs30 = gen::log_uniform(rng, 120.0, 1500.0);
    const double z = gen::uniform(rng, 0.0, 150.0);
    const double h = 1e-5;
    const double fd = (std::log(median_vs(z, profile_params(vs30, kTab1, h))) -
                       std::log(median_vs(z, profile_params(vs30, kTab1, -h)))) / (2.0 * h);
    const double an = dln_vs_dln_k(z, profile_params(vs30, kTab1));
    EXPECT_NEAR(an, fd, 1e-6 * std::max(1.0, std::abs(fd)));
  }
}

TEST(Discretize, DefaultRuleReproducesVs30) {
  for (double vs30 : {150.0, 300.0, 600.0, 1000.0, 1800.0}) {
    const LayeredProfile p = discretize(profile_params(vs30, kTab1), 30.0);
    EXPECT_NEAR(time_averaged_vs(p) / vs30, 1.0, 0.005) << vs30;
  }
}

TEST(Discretize, ContractAndConstantProfile) {
  const LayeredProfile p = discretize(profile_params(300.0, kTab1), 100.0);
  EXPECT_DOUBLE_EQ(p.depth_m(), 100.0);
  EXPECT_DOUBLE_EQ(p.layers().front().thickness_m, 0.5);
  for (const Layer& l : p.layers()) EXPECT_LE(l.thickness_m, 5.0 + 1e-12);
  const ProfileParams flat{300.0, 1e-14, 2.0, 300.0, 0.0};
  for (const Layer& l : discretize(flat, 40.0).layers()) EXPECT_NEAR(l.vs_mps, 300.0, 1e-9);
  EXPECT_THROW(discretize(flat, 0.0), DomainError);
}

TEST(TimeAverage, Examples) {
  const std::vector<double> h1{30.0}, v1{300.0};
  EXPECT_DOUBLE_EQ(time_averaged_vs(LayeredProfile::from_thicknesses("u", h1, v1)), 300.0);
  const std::vector<double> h2{15.0, 15.0}, v2{200.0, 600.0};
  const LayeredProfile two = LayeredProfile::from_thicknesses("t", h2, v2);
  EXPECT_NEAR(time_averaged_vs(two), 300.0, 1e-12);
  EXPECT_NEAR(time_averaged_vs(two, 1e-9), 200.0, 1e-9);
  EXPECT_NEAR(time_averaged_vs(two, 20.0), 20.0 / (15.0 / 200.0 + 5.0 / 600.0), 1e-12);
  EXPECT_THROW(time_averaged_vs(two, 31.0), DataError);
  EXPECT_THROW(time_averaged_vs(two, 0.0), DomainError);
}

TEST(FundamentalFrequency, Examples) {
  const std::vector<double> h1{30.0}, v1{200.0};
  EXPECT_NEAR(fp_quarter_wavelength(LayeredProfile::from_thicknesses("u", h1, v1), 30.0), 200.0 / 120.0, 1e-12);
  const std::vector<double> h2{15.0, 15.0}, v2{200.0, 600.0};
  const LayeredProfile two = LayeredProfile::from_thicknesses("t", h2, v2);
  EXPECT_NEAR(fp_quarter_wavelength(two, 30.0), 2.5, 1e-12);
  const std::vector<double> v3{200.0 * 1.7, 600.0 * 1.7};
  EXPECT_NEAR(fp_quarter_wavelength(LayeredProfile::from_thicknesses("s", h2, v3)), 2.5 * 1.7, 1e-12);
}

TEST(Residuals, Examples) {
  const ProfileParams p = profile_params(400.0, kTab1);
  const LayeredProfile m = discretize(p, 60.0);
  for (const Residual& r : residuals(m, p)) EXPECT_NEAR(r.eps, 0.0, 1e-12);
  std::vector<double> doubled;
  for (const Layer& l : m.layers()) doubled.push_back(2.0 * l.vs_mps);
  for (const Residual& r : residuals(m.with_velocities(doubled, Provenance::measured), p))
    EXPECT_NEAR(r.eps, std::log(2.0), 1e-12);
}

TEST(Residuals, NoiseSdMonteCarlo) {
  Rng rng(21);
  const ProfileParams p = profile_params(350.0, kTab1);
  const LayeredProfile m = discretize(p, 100.0);
  double ss = 0.0;
  std::size_t count = 0;
  while (count < 600) {
    std::vector<double> vs;
    for (const Layer& l : m.layers()) vs.push_back(l.vs_mps * std::exp(0.3759 * standard_normal(rng)));
    for (const Residual& r : residuals(m.with_velocities(vs, Provenance::measured), p)) {
      ss += r.eps * r.eps;
      ++count;
    }
  }
  EXPECT_NEAR(std::sqrt(ss / static_cast<double>(count)), 0.3759, 0.05);
}

TEST(Coefficients, PresetsAndValidation) {
  EXPECT_DOUBLE_EQ(kTab1.vs30_ref, 6.4990);
  EXPECT_DOUBLE_EQ(kTab1.sigma, 0.3759);
  ASSERT_TRUE(kTab1.depth.has_value());
  EXPECT_DOUBLE_EQ(kTab1.depth->range_r_m, 11.9293);
  const CoefficientSet sp = spatial_preset();
  ASSERT_TRUE(sp.spatial.has_value());
  EXPECT_DOUBLE_EQ(sp.spatial->omega, 0.3156);
  EXPECT_DOUBLE_EQ(sp.spatial->ell_km, 1.9104);
  EXPECT_DOUBLE_EQ(sp.sigma, 0.2807);
  EXPECT_DOUBLE_EQ(stationary_preset(Summary::mean).r3, 0.4236);
  CoefficientSet bad = kTab1;
  bad.vs30_w = -0.1;
  EXPECT_THROW(bad.validate(), DomainError);
  bad = kTab1;
  bad.z_star = 3.0;
  EXPECT_THROW(bad.validate(), DomainError);
}

TEST(Coefficients, JsonRoundTripIsExact) {
  Rng rng(31);
  for (int i = 0; i < 20; ++i) {
    CoefficientSet c = gen::random_coeffs(rng);
    if (i % 2) c.spatial = SpatialBlock{gen::uniform(rng, 0.5, 30.0), gen::uniform(rng, 0.0, 1.0)};
    else c.depth.reset();
    const CoefficientSet back = coefficients_from_json(coefficients_to_json(c));
    EXPECT_EQ(back.vs30_ref, c.vs30_ref);
    EXPECT_EQ(back.r2, c.r2);
    EXPECT_EQ(back.sigma, c.sigma);
    EXPECT_EQ(back.spatial.has_value(), c.spatial.has_value());
    EXPECT_EQ(back.depth.has_value(), c.depth.has_value());
    if (c.spatial) EXPECT_EQ(back.spatial->ell_km, c.spatial->ell_km);
  }
  EXPECT_THROW(coefficients_from_json("{\"vs30_ref\": 6.5}"), DataError);
}

TEST(Coefficients, BundledPresetFilesMatchPresets) {
  const std::filesystem::path dir = std::filesystem::path(SEDVEL_SOURCE_DIR) / "data" / "presets";
  const CoefficientSet a = load_coefficients(dir / "stationary_tab1.json");
  EXPECT_EQ(a.r1, kTab1.r1);
  EXPECT_EQ(a.s2, kTab1.s2);
  EXPECT_FALSE(a.spatial.has_value());
  const CoefficientSet b = load_coefficients(dir / "spatial_tab2.json");
  EXPECT_EQ(b.spatial->omega, spatial_preset().spatial->omega);
  EXPECT_EQ(b.vs30_w, spatial_preset().vs30_w);
}

TEST(ProfileIo, RoundTripAndErrors) {
  Rng rng(41);
  std::vector<LayeredProfile> ps;
  for (int i = 0; i < 5; ++i) {
    LayeredProfile p = gen::random_profile(rng, "P" + std::to_string(i));
    if (i % 2) p.set_location(Location{37.5 + 0.01 * i, -122.0 - 0.01 * i});
    ps.push_back(p);
  }
  // 6 significant digits: one write/read cycle reaches a fixed point
  const std::string text = format_profiles(parse_profiles(format_profiles(ps)));
  const auto back = parse_profiles(text);
  ASSERT_EQ(back.size(), ps.size());
  EXPECT_EQ(format_profiles(back), text);
  EXPECT_EQ(back[1].id(), "P1");
  EXPECT_TRUE(back[1].location().has_value());
  EXPECT_FALSE(back[0].location().has_value());

  EXPECT_THROW(parse_profiles("id,lat,lon,depth_top_m,thickness_m,vs\nA,,,0,1,100\n"), DataError);
  EXPECT_THROW(parse_profiles("id,lat,lon,depth_top_m,thickness_m,vs_mps\nA,,,0,1,100\nA,,,2,1,100\n"),
               DataError);
  EXPECT_THROW(parse_profiles("id,lat,lon,depth_top_m,thickness_m,vs_mps\nA,,,0,1,-5\n"), DataError);
  EXPECT_THROW(parse_profiles("id,lat,lon,depth_top_m,thickness_m,vs_mps\nA,,,0,abc,100\n"), DataError);
}

TEST(LayeredProfile, Invariants) {
  EXPECT_THROW(LayeredProfile("x", {{0.0, 0.0, 100.0}}), DataError);
  EXPECT_THROW(LayeredProfile("x", {{1.0, 1.0, 100.0}}), DataError);
  EXPECT_THROW(LayeredProfile("x", {{0.0, 1.0, 100.0}, {1.5, 1.0, 100.0}}), DataError);
  const LayeredProfile p("x", {{0.0, 1.0, 100.0}, {1.0, 2.0, 200.0}});
  EXPECT_DOUBLE_EQ(p.vs_at(1.0), 100.0);
  EXPECT_DOUBLE_EQ(p.vs_at(1.5), 200.0);
}
