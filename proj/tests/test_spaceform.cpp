#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "orbispec/spaceform.hpp"

using namespace orbispec;

TEST(Snk, DisplayedCases) {
  EXPECT_DOUBLE_EQ(snk(0.0, 2.0), 2.0);
  EXPECT_NEAR(snk(1.0, kPi / 2.0), 1.0, 1e-15);
  EXPECT_NEAR(snk(-1.0, 1.0), oracle::sinh_series(1.0), 1e-15);
  EXPECT_NEAR(snk(-1.0, 1.0), 1.1752011936438014, 1e-15);
}

TEST(Snk, ContinuousAtFlat) {
  for (double r : {0.1, 1.0, 3.0}) {
    for (double k : {1e-7, -1e-7, 1e-10, -1e-12}) {
      EXPECT_NEAR(snk(k, r) / r, 1.0, 1e-6) << k << " " << r;
    }
    EXPECT_NEAR(snk(1e-12, r), r, 1e-9 * r);
  }
}

TEST(Snk, Domain) {
  EXPECT_THROW(snk(0.0, -1.0), DomainError);
  EXPECT_THROW(snk(1.0, kPi + 1e-6), DomainError);
  EXPECT_NO_THROW(snk(1.0, kPi));
  EXPECT_THROW(SpaceForm(1, 0.0), DomainError);
  EXPECT_THROW(SpaceForm(2, std::numeric_limits<double>::infinity()), DomainError);
}

TEST(BallVolume, ClosedForms) {
  EXPECT_NEAR(ball_volume({2, 0.0}, 1.7), kPi * 1.7 * 1.7, 1e-13);
  EXPECT_NEAR(ball_volume({2, 1.0}, kPi), 4.0 * kPi, 1e-13);
  EXPECT_NEAR(ball_volume({2, 1.0}, 1.0), 2.0 * kPi * (1.0 - std::cos(1.0)), 1e-13);
  EXPECT_NEAR(total_volume({3, 1.0}), 2.0 * kPi * kPi, 1e-12);
  EXPECT_TRUE(std::isinf(total_volume({3, -1.0})));
}

TEST(BallVolume, MatchesSimpsonOracle) {
  for (int n : {2, 3, 4, 5, 7}) {
    for (double k : {-1.0, -0.3, 0.0, 0.5, 1.0}) {
      for (double r : {0.2, 1.0, 2.5}) {
        if (k > 0 && r > kPi / std::sqrt(k)) continue;
        const double ref = oracle::ball_volume(n, k, r);
        EXPECT_NEAR(ball_volume({n, k}, r), ref, 1e-9 * ref) << n << " " << k << " " << r;
      }
    }
  }
}

TEST(BallVolume, StrictlyIncreasing) {
  for (double k : {-1.0, 0.0, 1.0}) {
    const SpaceForm sf(4, k);
    double prev = -1.0;
    for (int i = 0; i <= 300; ++i) {
      const double v = ball_volume(sf, kPi * i / 300.0);
      EXPECT_GT(v, prev);
      prev = v;
    }
  }
}

TEST(CapMeasure, Examples) {
  EXPECT_NEAR(cap_measure(2, kPi / 2.0), 2.0 * kPi, 1e-13);
  EXPECT_EQ(cap_measure(3, 0.0), 0.0);
  EXPECT_NEAR(cap_measure(1, 0.7), 1.4, 1e-14);
  EXPECT_THROW(cap_measure(2, 3.5), DomainError);
  for (int d = 1; d <= 8; ++d) {
    EXPECT_NEAR(cap_measure(d, kPi), oracle::sphere_area(d), 1e-11);
    for (double t : {0.1, 0.9, 1.3, 2.9}) {
      EXPECT_NEAR(cap_measure(d, t) + cap_measure(d, kPi - t), oracle::sphere_area(d), 1e-10);
    }
  }
}

TEST(TwoCap, Examples) {
  for (int d = 1; d <= 5; ++d) EXPECT_EQ(two_cap_complement_measure(d, 0.0, kPi / 2.0), 0.0);
  EXPECT_NEAR(two_cap_complement_measure(2, kPi / 2.0, kPi), 0.0, 1e-14);
  // both caps shrink to points: everything remains
  EXPECT_NEAR(two_cap_complement_measure(2, 0.3, 0.0), 4.0 * kPi, 1e-11);
  // on the circle the set is two arcs of length 2 alpha each
  EXPECT_NEAR(two_cap_complement_measure(1, 0.2, kPi / 2.0 - 0.2), 0.8, 1e-13);
  EXPECT_THROW(two_cap_complement_measure(2, 1.7, 0.5), DomainError);
}

TEST(TwoCap, IncreasesWithAlpha) {
  double prev = -1.0;
  for (int i = 0; i <= 40; ++i) {
    const double a = (kPi / 2.0) * i / 40.0;
    const double m = two_cap_complement_measure(3, a, kPi / 2.0 - a);
    EXPECT_GE(m, prev - 1e-12);
    prev = m;
  }
}

TEST(TwoCap, MatchesQuasiRandomOracle) {
  struct Case {
    int d;
    double alpha, theta;
  };
  for (const auto& c : {Case{2, kPi / 4.0, kPi / 4.0}, Case{2, 0.3, 1.0}, Case{3, 0.2, kPi / 2.0 - 0.2},
                        Case{4, 0.5, 0.8}, Case{1, 0.4, 0.9}}) {
    const auto mc = oracle::two_cap_complement(c.d, c.alpha, c.theta, 400000);
    const double m = two_cap_complement_measure(c.d, c.alpha, c.theta);
    EXPECT_LE(std::abs(m - mc.estimate), 3.0 * mc.sigma + 1e-12) << c.d << " " << c.alpha << " " << c.theta;
  }
}

TEST(ConeVolume, Examples) {
  const SpaceForm flat(2, 0.0);
  EXPECT_NEAR(cone_volume(flat, 1.0, kPi), kPi / 2.0, 1e-14);
  EXPECT_EQ(cone_volume(flat, 1.0, 0.0), 0.0);
  for (double k : {-1.0, 0.0, 1.0}) {
    const SpaceForm sf(3, k);
    EXPECT_NEAR(cone_volume(sf, 1.2, 4.0 * kPi), ball_volume(sf, 1.2), 1e-12);
    const double a = cone_volume(sf, 1.2, 1.0), b = cone_volume(sf, 1.2, 2.5);
    EXPECT_NEAR(a + b, cone_volume(sf, 1.2, 3.5), 1e-12);
  }
  EXPECT_THROW(cone_volume(flat, 1.0, 7.0), DomainError);
}

TEST(LawOfCosines, Examples) {
  EXPECT_NEAR(law_of_cosines_side(0.0, 3.0, 4.0, kPi / 2.0), 5.0, 1e-14);
  for (double g : {0.0, 0.4, 1.5, 3.0}) EXPECT_NEAR(law_of_cosines_side(1.0, kPi / 2.0, kPi / 2.0, g), g, 1e-13);
  EXPECT_NEAR(law_of_cosines_side(-1.0, 2.5, 0.75, 0.0), 1.75, 1e-13);
  EXPECT_THROW(law_of_cosines_side(1.0, 4.0, 1.0, 0.3), DomainError);
}

TEST(LawOfCosines, AgreesWithCosineForms) {
  for (double a : {0.3, 1.0, 2.0}) {
    for (double b : {0.5, 1.4}) {
      for (double g : {0.2, 1.0, 2.5}) {
        const double sph = std::acos(std::cos(a) * std::cos(b) + std::sin(a) * std::sin(b) * std::cos(g));
        EXPECT_NEAR(law_of_cosines_side(1.0, a, b, g), sph, 1e-12);
        const double hyp = std::acosh(std::cosh(a) * std::cosh(b) - std::sinh(a) * std::sinh(b) * std::cos(g));
        EXPECT_NEAR(law_of_cosines_side(-1.0, a, b, g), hyp, 1e-10);
      }
    }
  }
}

TEST(LawOfCosines, ContinuousAtFlat) {
  const double flat = law_of_cosines_side(0.0, 1.0, 2.0, 1.0);
  for (double k : {1e-9, -1e-9, 1e-7, -1e-7}) EXPECT_NEAR(law_of_cosines_side(k, 1.0, 2.0, 1.0), flat, 1e-6);
}

TEST(LawOfCosines, NonDecreasingInAngle) {
  for (double k : {-1.0, 0.0, 1.0}) {
    double prev = -1.0;
    for (int i = 0; i <= 200; ++i) {
      const double c = law_of_cosines_side(k, 0.8, 1.3, kPi * i / 200.0);
      EXPECT_GE(c, prev - 1e-14);
      prev = c;
    }
  }
}

TEST(BonnetMyers, Cap) {
  EXPECT_DOUBLE_EQ(bonnet_myers_cap(1.0), kPi);
  EXPECT_DOUBLE_EQ(bonnet_myers_cap(4.0), kPi / 2.0);
  EXPECT_TRUE(std::isinf(bonnet_myers_cap(0.0)));
  EXPECT_TRUE(std::isinf(bonnet_myers_cap(-2.0)));
}

// 1 - cos r is written 2 sin^2(r/2) to keep the small-r limit accurate.
TEST(RelativeVolume, ConePointRatio) {
  for (int k : {2, 3, 4, 6}) {
    const SpaceForm sf(2, 1.0);
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= 1000; ++i) {
      const double r = kPi * i / 1000.0;
      const double ratio = (2.0 * kPi / k) * 2.0 * std::pow(std::sin(r / 2.0), 2) / ball_volume(sf, r);
      EXPECT_LE(ratio, prev + 1e-12);
      prev = ratio;
    }
    const double r0 = 1e-6;
    EXPECT_NEAR((2.0 * kPi / k) * 2.0 * std::pow(std::sin(r0 / 2.0), 2) / ball_volume(sf, r0), 1.0 / k, 1e-9);
  }
}
