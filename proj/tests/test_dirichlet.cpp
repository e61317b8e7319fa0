#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "orbispec/dirichlet.hpp"

using namespace orbispec;

TEST(Shooting, FlatBallsAreBesselZeros) {
  // Flat unit n-ball: lambda = j_{n/2 - 1, 1}^2.
  for (int n : {2, 3, 4, 5, 6}) {
    const double ref = oracle::bessel_zero_squared(0.5 * n - 1.0);
    EXPECT_NEAR(lowest_dirichlet_eigenvalue({n, 0.0}, 1.0), ref, 1e-8 * ref) << n;
  }
  EXPECT_NEAR(lowest_dirichlet_eigenvalue({3, 0.0}, 1.0), kPi * kPi, 1e-8 * kPi * kPi);
}

TEST(Shooting, Hemisphere) {
  for (int n : {2, 3, 4}) EXPECT_NEAR(lowest_dirichlet_eigenvalue({n, 1.0}, kPi / 2.0), n, 1e-6);
}

TEST(Shooting, EuclideanScaling) {
  for (int n : {2, 3}) {
    const double base = lowest_dirichlet_eigenvalue({n, 0.0}, 1.0);
    for (double r : {0.1, 10.0, 0.003}) {
      EXPECT_NEAR(lowest_dirichlet_eigenvalue({n, 0.0}, r) * r * r, base, 1e-9 * base);
    }
  }
}

TEST(Shooting, DecreasingInRadius) {
  for (double k : {-1.0, 0.0, 1.0}) {
    for (int n : {2, 3, 4}) {
      double prev = std::numeric_limits<double>::infinity();
      for (int i = 1; i <= 12; ++i) {
        const double lam = lowest_dirichlet_eigenvalue({n, k}, 0.25 * i);
        EXPECT_LT(lam, prev) << n << " " << k << " " << i;
        prev = lam;
      }
    }
  }
}

TEST(Shooting, NonIncreasingInCurvature) {
  for (int n : {2, 3}) {
    for (double r : {0.5, 1.5}) {
      double prev = std::numeric_limits<double>::infinity();
      for (double k : {-2.0, -1.0, -0.1, 0.0, 0.1, 1.0}) {
        const double lam = lowest_dirichlet_eigenvalue({n, k}, r);
        EXPECT_LE(lam, prev);
        prev = lam;
      }
    }
  }
}

TEST(Shooting, Domain) {
  EXPECT_THROW(lowest_dirichlet_eigenvalue({2, 0.0}, 0.0), DomainError);
  EXPECT_THROW(lowest_dirichlet_eigenvalue({2, 1.0}, kPi), DomainError);
  ShootingConfig bad;
  bad.root_tol = 0.1;
  EXPECT_THROW(lowest_dirichlet_eigenvalue({2, 0.0}, 1.0, bad), DomainError);
  bad = {};
  bad.max_iter = 4;
  EXPECT_THROW(lowest_dirichlet_eigenvalue({2, 0.0}, 1.0, bad), DomainError);
}

TEST(FdOracle, Examples) {
  EXPECT_NEAR(fd_oracle_eigenvalue({2, 0.0}, 1.0, 4096), 5.7832, 1e-4);
  EXPECT_NEAR(fd_oracle_eigenvalue({2, 1.0}, kPi / 2.0, 4096), 2.0, 1e-4);
  const double one = fd_oracle_eigenvalue({2, 0.0}, 1.0, 512);
  EXPECT_NEAR(fd_oracle_eigenvalue({2, 0.0}, 2.0, 512), one / 4.0, 1e-12 * one);
  EXPECT_THROW(fd_oracle_eigenvalue({2, 0.0}, 1.0, 32), DomainError);
}

TEST(FdOracle, SecondOrderSelfConvergence) {
  const double a = fd_oracle_eigenvalue({3, -1.0}, 1.0, 256);
  const double b = fd_oracle_eigenvalue({3, -1.0}, 1.0, 512);
  const double c = fd_oracle_eigenvalue({3, -1.0}, 1.0, 1024);
  EXPECT_NEAR((a - b) / (b - c), 4.0, 0.1);
}

TEST(FdOracle, AgreesWithShooting) {
  for (int n : {2, 3, 4}) {
    for (double k : {-1.0, 0.0, 1.0}) {
      const double shoot = lowest_dirichlet_eigenvalue({n, k}, 1.0);
      const double fd = fd_oracle_richardson({n, k}, 1.0, 1024);
      EXPECT_NEAR(fd, shoot, 1e-6 * shoot) << n << " " << k;
    }
  }
}

TEST(Rayleigh, Examples) {
  const std::vector<double> ones(10, 1.0), zeros(10, 0.0), w(10, 0.1);
  EXPECT_EQ(rayleigh_quotient_discrete(ones, zeros, w), 0.0);
  EXPECT_THROW(rayleigh_quotient_discrete(zeros, zeros, w), DomainError);

  const auto gs = fd_ground_state({2, 0.0}, 1.0, 1024);
  const double q = rayleigh_quotient_discrete(gs.values, gs.value_weights, gs.gradient_values, gs.gradient_weights);
  EXPECT_NEAR(q, gs.eigenvalue, 1e-9 * gs.eigenvalue);
  EXPECT_NEAR(q, 5.7832, 1e-3);
}

TEST(Rayleigh, BoundedBelowByDiscreteEigenvalue) {
  const auto gs = fd_ground_state({3, 1.0}, 1.0, 256);
  const std::size_t m = gs.values.size();
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> f(m), grad(m);
    for (auto& x : f) x = u(rng);
    for (std::size_t i = 0; i < m; ++i) {
      const double next = i + 1 < m ? f[i + 1] : 0.0;
      grad[i] = std::abs(next - f[i]) / (gs.nodes[1] - gs.nodes[0]);
    }
    const double q = rayleigh_quotient_discrete(f, gs.value_weights, grad, gs.gradient_weights);
    EXPECT_GE(q, gs.eigenvalue * (1.0 - 1e-10));
  }
}
