#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "orbispec/bounds.hpp"

using namespace orbispec;

namespace {

Spectrum catalog_spectrum(const std::string& id, double lambda) { return model_spectrum(find_model(model_catalog(), id), lambda); }

const double kTorusLambda = 4.0 * kPi * kPi * 400.0;

}  // namespace

TEST(DiameterBound, SphereHemisphereRadius) {
  const auto b = diameter_bound(sphere_spectrum(2, 30.0), 1.0, 2, kPi / 2.0);
  EXPECT_NEAR(b.threshold, 2.0, 1e-6);
  EXPECT_EQ(b.rho, 4);
  EXPECT_DOUBLE_EQ(b.diameter, kPi);
}

TEST(DiameterBound, TorusQuarterRadius) {
  const auto s = flat_torus_spectrum(Matrix::Identity(2, 2), kTorusLambda);
  const auto b = diameter_bound(s, 0.0, 2, 0.25);
  const double lam = 16.0 * oracle::bessel_zero_squared(0.0);
  EXPECT_NEAR(b.threshold, lam, 1e-8 * lam);
  EXPECT_EQ(b.rho, oracle::rectangular_torus_count(1.0, 1.0, lam));
  EXPECT_DOUBLE_EQ(b.diameter, 0.5 * static_cast<double>(b.rho + 1));
}

TEST(DiameterBound, OnlyConstantsBelowThreshold) {
  const auto s = sphere_spectrum(2, 30.0);
  const auto b = diameter_bound(s, 0.0, 2, 2.0);  // lambda = 5.78/4 < 2
  EXPECT_EQ(b.rho, 1);
  EXPECT_DOUBLE_EQ(b.diameter, 8.0);
}

TEST(DiameterBound, Preconditions) {
  const auto s = sphere_spectrum(2, 30.0);
  EXPECT_THROW(diameter_bound(s, 0.0, 2, 0.0), DomainError);
  EXPECT_THROW(diameter_bound(s, 1.0, 2, kPi), DomainError);
  try {
    diameter_bound(s, 0.0, 2, 0.1);
    FAIL() << "expected a certification error";
  } catch (const CertificationError& e) {
    EXPECT_EQ(e.stage(), "diameter");
  }
}

TEST(DiameterBound, InvariantUnderLongerTruncation) {
  const auto a = diameter_bound(sphere_spectrum(2, 200.0), 0.0, 2, 0.5);
  const auto b = diameter_bound(sphere_spectrum(2, 5000.0), 0.0, 2, 0.5);
  EXPECT_EQ(a.rho, b.rho);
  EXPECT_EQ(a.diameter, b.diameter);
}

TEST(BestDiameter, Examples) {
  const auto s2 = sphere_spectrum(2, 100.0 * 101.0);
  EXPECT_DOUBLE_EQ(best_diameter_bound(s2, 1.0, 2, default_r_grid(2, 1.0, 4.0 * kPi)).diameter, kPi);

  const auto torus = flat_torus_spectrum(Matrix::Identity(2, 2), kTorusLambda);
  std::vector<double> grid;
  for (int i = 0; i < 40; ++i) grid.push_back(0.01 * std::pow(100.0, i / 39.0));
  const auto best = best_diameter_bound(torus, 0.0, 2, grid);
  EXPECT_TRUE(std::isfinite(best.diameter));
  EXPECT_GE(best.diameter, std::sqrt(2.0) / 2.0);

  const auto single = best_diameter_bound(torus, 0.0, 2, {0.25});
  EXPECT_EQ(single.diameter, diameter_bound(torus, 0.0, 2, 0.25).diameter);
  EXPECT_THROW(best_diameter_bound(torus, 0.0, 2, {1e-4}), CertificationError);
  EXPECT_THROW(best_diameter_bound(torus, 0.0, 2, {}), DomainError);
}

TEST(BestDiameter, TiesGoToSmallerRadius) {
  const auto s2 = sphere_spectrum(2, 100.0 * 101.0);
  const auto best = best_diameter_bound(s2, 1.0, 2, {2.5, 1.5, 2.0});
  EXPECT_DOUBLE_EQ(best.r, 1.5);
}

TEST(Isotropy, Examples) {
  for (int k : {2, 3, 4, 6}) EXPECT_EQ(isotropy_order_cap(2, 1.0, 4.0 * kPi / k, kPi), k);
  EXPECT_GE(isotropy_order_cap(2, 0.0, 0.5, 0.75), 2);
  EXPECT_EQ(isotropy_order_cap(2, 0.0, 100.0, 0.1), 1);
  EXPECT_THROW(isotropy_order_cap(2, 0.0, 0.0, 1.0), DomainError);
}

TEST(Isotropy, Monotone) {
  std::int64_t prev = 0;
  for (int i = 1; i <= 50; ++i) {
    const auto c = isotropy_order_cap(3, -1.0, 0.7, 0.1 * i);
    EXPECT_GE(c, prev);
    prev = c;
  }
  prev = std::numeric_limits<std::int64_t>::max();
  for (int i = 1; i <= 50; ++i) {
    const auto c = isotropy_order_cap(2, 0.0, 0.05 * i, 1.5);
    EXPECT_LE(c, prev);
    prev = c;
  }
}

TEST(Isotropy, FitDimensionMustMatchSpectrum) {
  auto s = sphere_spectrum(2, 100.0);
  s.dimension = 2;
  WeylFit fit;
  fit.dimension = 3;
  fit.volume = 1.0;
  EXPECT_THROW(isotropy_order_cap(s, 1.0, fit, kPi), DomainError);
}

TEST(IsotropyTypes, Enumeration) {
  EXPECT_EQ(isotropy_type_enumeration(2, 3).groups, (std::vector<std::string>{"C2", "C3"}));
  EXPECT_TRUE(isotropy_type_enumeration(2, 1).groups.empty());
  const auto three = isotropy_type_enumeration(3, 5);
  EXPECT_TRUE(three.groups.empty());
  EXPECT_NE(three.note.find("5"), std::string::npos);
}

TEST(Constants, AlphaSphereExample) {
  // on S^1 the direction set is two arcs of length 2 alpha, so the cone is
  // 4 alpha (1 - cos pi) = 8 alpha and alpha* solves 8 alpha = v/6
  const double a = alpha_constant(2, 1.0, kPi, 4.0 * kPi / 3.0);
  EXPECT_NEAR(a, kPi / 36.0, 1e-9);
  EXPECT_LT(alpha_cone_volume(2, 1.0, kPi, a), 4.0 * kPi / 18.0);
}

TEST(Constants, AlphaGrowsWithVolume) {
  double prev = 0.0;
  for (double v : {0.01, 0.1, 0.5, 1.0, 2.0}) {
    const double a = alpha_constant(3, 0.0, 1.0, v);
    EXPECT_GT(a, prev);
    EXPECT_LT(a, kPi / 2.0);
    prev = a;
  }
}

TEST(Constants, Ell) {
  const double v = 0.9;
  EXPECT_NEAR(ell_constant(2, 0.0, v), (1.0 - 1e-6) * std::sqrt(v / (3.0 * kPi)), 1e-13);
  EXPECT_NEAR(ell_constant(3, -1.0, 3.0 * ball_volume({3, -1.0}, 1.0)), 1.0 - 1e-6, 1e-12);
  EXPECT_NEAR(ell_constant(2, 1.0, 4.0 * kPi), std::acos(1.0 / 3.0) * (1.0 - 1e-6), 1e-12);
}

TEST(Constants, REuclideanClosedForm) {
  for (double alpha : {0.05, 0.3, 0.6, 1.2, 1.5}) {
    const double ell = 0.4;
    const double r = r_constant(2, 0.0, alpha, ell, 2.0);
    EXPECT_NEAR(r, std::min(ell, 2.0 * ell * std::sin(alpha)) * (1.0 - 1e-6), 1e-3) << alpha;
    EXPECT_LT(r, ell);
  }
}

TEST(Constants, RHyperbolicAgainstBisection) {
  for (double alpha : {0.1, 0.4, 0.5}) {
    const double ell = 0.8;
    const double ref = std::min(ell, oracle::hyperbolic_separation(alpha, ell));
    EXPECT_NEAR(r_constant(2, -1.0, alpha, ell, 3.0), ref, 1e-3) << alpha;
  }
}

TEST(Constants, RPreconditions) {
  EXPECT_THROW(r_constant(2, 0.0, 0.0, 1.0, 2.0), DomainError);
  EXPECT_THROW(r_constant(2, 0.0, 0.3, 1.0, 0.5), DomainError);
}

TEST(SingularCap, Examples) {
  for (int k : {2, 3, 4, 6}) {
    const auto c = singular_point_cap(2, 1.0, kPi, 4.0 * kPi / k);
    EXPECT_GE(c.cap, 2);
    EXPECT_GT(c.r, 0.0);
    EXPECT_LT(c.r, c.ell);
  }
  EXPECT_GE(singular_point_cap(2, 0.0, 1.6, 0.5).cap, 4);
  EXPECT_GE(singular_point_cap(2, 0.0, 0.5, 10.0).cap, 1);
}

TEST(Pipeline, SphereQuotient) {
  const auto rep = main_theorem_2(catalog_spectrum("s2-mod-4", 100.0 * 101.0), 1.0);
  EXPECT_EQ(rep.n, 2);
  EXPECT_EQ(rep.source, "weyl-estimated");
  EXPECT_DOUBLE_EQ(rep.diameter, kPi);
  EXPECT_GE(rep.isotropy_cap, 4);
  ASSERT_TRUE(rep.singular_cap.has_value());
  EXPECT_GE(*rep.singular_cap, 2);
  ASSERT_EQ(rep.stage_trace.size(), 4u);
  EXPECT_EQ(rep.stage_trace.front().stage, "weyl");
  EXPECT_EQ(rep.stage_trace.back().stage, "singular");
}

TEST(Pipeline, GivenVolumeIsRecorded) {
  PipelineOptions opt;
  opt.n = 2;
  opt.v = 4.0 * kPi / 3.0;
  const auto rep = main_theorem_1(catalog_spectrum("s2-mod-3", 100.0 * 101.0), 1.0, opt);
  EXPECT_EQ(rep.source, "given");
  EXPECT_EQ(rep.isotropy_cap, 3);
  EXPECT_FALSE(rep.weyl.has_value());
  EXPECT_FALSE(rep.singular_cap.has_value());
}

TEST(Pipeline, TorusCompletes) {
  const auto rep = main_theorem_2(catalog_spectrum("torus", kTorusLambda), 0.0);
  EXPECT_GE(*rep.singular_cap, 0);
  EXPECT_GE(rep.diameter, std::sqrt(2.0) / 2.0);
}

TEST(Pipeline, ShortSpectrumFailsAtDiameter) {
  PipelineOptions opt;
  opt.n = 2;
  opt.v = 1.0;
  // kappa = 0 keeps every grid radius below ~1.13, so thresholds exceed 2.5
  try {
    main_theorem_2(sphere_spectrum(2, 2.5), 0.0, opt);
    FAIL() << "expected failure";
  } catch (const CertificationError& e) {
    EXPECT_EQ(e.stage(), "diameter");
  }
}

TEST(Pipeline, WeylStageNamedOnTooFewEigenvalues) {
  try {
    main_theorem_2(sphere_spectrum(2, 30.0), 1.0);
    FAIL() << "expected failure";
  } catch (const CertificationError& e) {
    EXPECT_EQ(e.stage(), "weyl");
  }
}

TEST(Pipeline, IsospectralInputsGiveIdenticalReports) {
  const auto a = catalog_spectrum("pillowcase", kTorusLambda);
  Spectrum b = a;
  b.dimension = std::nullopt;
  const auto ra = main_theorem_2(a, 0.0), rb = main_theorem_2(b, 0.0);
  EXPECT_EQ(ra.spectrum_id, rb.spectrum_id);
  EXPECT_EQ(ra.diameter, rb.diameter);
  EXPECT_EQ(ra.singular_cap, rb.singular_cap);
  EXPECT_EQ(ra.r_sep, rb.r_sep);
}
