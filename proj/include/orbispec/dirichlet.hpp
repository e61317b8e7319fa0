#ifndef ORBISPEC_DIRICHLET_HPP
#define ORBISPEC_DIRICHLET_HPP

// Lowest Dirichlet eigenvalue of geodesic balls in M^n_kappa.
//
// Both solvers work on the unit ball of M^n_{kappa r^2}: since
// sn_kappa(r t) = r sn_{kappa r^2}(t), the eigenvalue of B^n_kappa(r) is the
// unit-ball eigenvalue divided by r^2.

#include <lapacke.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include "orbispec/errors.hpp"
#include "orbispec/spaceform.hpp"

namespace orbispec {

struct ShootingConfig {
  double ode_step = 1e-3;  // initial step, as a fraction of the radius
  double ode_tol = 1e-10;
  double lambda_bracket_growth = 2.0;
  double root_tol = 1e-12;
  int max_iter = 200;

  void validate() const {
    if (!(ode_step > 0.0 && ode_step < 1.0)) throw DomainError("ShootingConfig: ode_step must lie in (0, 1)");
    if (!(ode_tol > 0.0)) throw DomainError("ShootingConfig: ode_tol must be positive");
    if (!(lambda_bracket_growth > 1.0)) throw DomainError("ShootingConfig: lambda_bracket_growth must exceed 1");
    if (!(root_tol > 0.0 && root_tol <= 1e-3)) throw DomainError("ShootingConfig: root_tol must lie in (0, 1e-3]");
    if (max_iter < 16) throw DomainError("ShootingConfig: max_iter must be >= 16");
  }
};

/// Largest admissible ball radius relative to pi/sqrt(kappa).
inline constexpr double kCapMargin = 1.0 - 1e-9;

namespace detail {

inline void check_ball_radius(const SpaceForm& sf, double r, const char* who) {
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError(std::string(who) + ": radius must be positive, got " + fmt(r));
  if (sf.kappa > 0.0 && r > kCapMargin * bonnet_myers_cap(sf.kappa)) {
    throw DomainError(std::string(who) + ": radius " + fmt(r) + " too close to pi/sqrt(kappa) = " +
                      fmt(bonnet_myers_cap(sf.kappa)));
  }
}

struct Shot {
  double f_end = 1.0;
  int zeros = 0;
};

// Integrates f'' + (n-1)(sn'/sn) f' + mu f = 0 on (0, 1] from the regular
// series f = 1 - mu t^2 / (2n) and counts sign changes of f.
inline Shot shoot_unit_ball(int n, double kappa_hat, double mu, const ShootingConfig& cfg) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 2>;

  const double t0 = 1e-6;
  State x{1.0 - mu * t0 * t0 / (2.0 * n), -mu * t0 / n};
  auto rhs = [n, kappa_hat, mu](const State& s, State& ds, double t) {
    const double friction = (n - 1) * cs_unchecked(kappa_hat, t) / sn_unchecked(kappa_hat, t);
    ds[0] = s[1];
    ds[1] = -friction * s[1] - mu * s[0];
  };

  Shot shot;
  double prev = x[0];
  auto observer = [&](const State& s, double) {
    if ((prev > 0.0 && s[0] <= 0.0) || (prev < 0.0 && s[0] >= 0.0)) ++shot.zeros;
    if (s[0] != 0.0) prev = s[0];
  };
  auto stepper = odeint::make_controlled(cfg.ode_tol, cfg.ode_tol, 0.02, odeint::runge_kutta_dopri5<State>());
  odeint::integrate_adaptive(stepper, rhs, x, t0, 1.0, cfg.ode_step, observer);
  shot.f_end = x[0];
  return shot;
}

inline double lowest_unit_ball_eigenvalue(int n, double kappa_hat, const ShootingConfig& cfg) {
  // Euclidean first-zero proxy: j_{n/2-1,1} ~ pi/2 + n/2.
  double lo = 0.0;
  double hi = std::pow(kPi / 2.0 + 0.5 * n, 2);
  Shot shot_hi = shoot_unit_ball(n, kappa_hat, hi, cfg);
  int iter = 0;
  auto bracket = [&] { return "bracket [" + fmt(lo) + ", " + fmt(hi) + "] after " + std::to_string(iter) + " iterations"; };

  while (shot_hi.zeros == 0) {
    if (++iter > cfg.max_iter) throw ConvergenceError("lowest_dirichlet_eigenvalue: no sign change, " + bracket());
    lo = hi;
    hi *= cfg.lambda_bracket_growth;
    shot_hi = shoot_unit_ball(n, kappa_hat, hi, cfg);
  }
  // Shrink until only the first radial eigenvalue lies in (lo, hi].
  while (shot_hi.zeros > 1) {
    if (++iter > cfg.max_iter) throw ConvergenceError("lowest_dirichlet_eigenvalue: could not isolate, " + bracket());
    const double mid = 0.5 * (lo + hi);
    const Shot s = shoot_unit_ball(n, kappa_hat, mid, cfg);
    if (s.zeros == 0) {
      lo = mid;
    } else {
      hi = mid;
      shot_hi = s;
    }
  }
  if (shot_hi.f_end == 0.0) return hi;

  const double f_lo = lo == 0.0 ? 1.0 : shoot_unit_ball(n, kappa_hat, lo, cfg).f_end;
  if (!(f_lo > 0.0 && shot_hi.f_end < 0.0)) {
    throw ConvergenceError("lowest_dirichlet_eigenvalue: lost sign change, " + bracket());
  }
  auto f_end = [&](double mu) { return shoot_unit_ball(n, kappa_hat, mu, cfg).f_end; };
  auto tol = [&cfg](double a, double b) { return std::abs(b - a) <= cfg.root_tol * std::min(std::abs(a), std::abs(b)); };
  std::uintmax_t it = static_cast<std::uintmax_t>(cfg.max_iter);
  const auto [a, b] = boost::math::tools::toms748_solve(f_end, lo, hi, f_lo, shot_hi.f_end, tol, it);
  if (it >= static_cast<std::uintmax_t>(cfg.max_iter)) {
    lo = a;
    hi = b;
    throw ConvergenceError("lowest_dirichlet_eigenvalue: root polish did not converge, " + bracket());
  }
  return 0.5 * (a + b);
}

}  // namespace detail

/// lambda^n_kappa(r), the lowest Dirichlet eigenvalue of B^n_kappa(r), by
/// radial shooting. Requires r <= (1 - 1e-9) pi/sqrt(kappa) when kappa > 0;
/// accuracy degrades as r approaches that cap.
inline double lowest_dirichlet_eigenvalue(const SpaceForm& sf, double r, const ShootingConfig& cfg = {}) {
  cfg.validate();
  detail::check_ball_radius(sf, r, "lowest_dirichlet_eigenvalue");
  return detail::lowest_unit_ball_eigenvalue(sf.n, sf.kappa * r * r, cfg) / (r * r);
}

/// Ground state of the finite-volume discretization of the radial Dirichlet
/// problem, with everything needed to evaluate its discrete Rayleigh quotient.
struct FdGroundState {
  double eigenvalue = 0.0;
  std::vector<double> nodes;             // radii t_i = i h, i < mesh_points
  std::vector<double> values;            // eigenvector at the nodes (f = 0 at r)
  std::vector<double> value_weights;     // control volumes around the nodes
  std::vector<double> gradient_values;   // |f'| at cell faces t_{i+1/2}
  std::vector<double> gradient_weights;  // face weight sn^(n-1) times h
};

namespace detail {

struct FdSystem {
  std::vector<double> diag, offdiag, volumes, faces;
  double h = 0.0;
};

// Symmetric form B^-1/2 A B^-1/2 of the discrete operator on the unit ball.
inline FdSystem build_fd_system(int n, double kappa_hat, int mesh_points) {
  FdSystem sys;
  const int m = mesh_points;
  sys.h = 1.0 / m;
  const double h = sys.h;
  auto density = [n, kappa_hat](double t) { return std::pow(sn_unchecked(kappa_hat, t), n - 1); };
  auto cell = [&](double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(density, a, b, 0);
  };
  sys.faces.resize(m);
  sys.volumes.resize(m);
  for (int i = 0; i < m; ++i) {
    sys.faces[i] = density((i + 0.5) * h);
    sys.volumes[i] = cell(std::max(0.0, (i - 0.5) * h), (i + 0.5) * h);
  }
  sys.diag.resize(m);
  sys.offdiag.resize(m - 1);
  for (int i = 0; i < m; ++i) {
    const double left = i > 0 ? sys.faces[i - 1] : 0.0;
    sys.diag[i] = (left + sys.faces[i]) / h / sys.volumes[i];
    if (i + 1 < m) sys.offdiag[i] = -sys.faces[i] / h / std::sqrt(sys.volumes[i] * sys.volumes[i + 1]);
  }
  return sys;
}

inline double smallest_tridiagonal_eigenvalue(const FdSystem& sys, lapack_int* block = nullptr,
                                              lapack_int* split = nullptr) {
  const auto m = static_cast<lapack_int>(sys.diag.size());
  lapack_int found = 0, nsplit = 0;
  std::vector<double> w(m);
  std::vector<lapack_int> iblock(m), isplit(m);
  const lapack_int info = LAPACKE_dstebz('I', 'E', m, 0.0, 0.0, 1, 1, 2.0 * LAPACKE_dlamch('S'), sys.diag.data(), sys.offdiag.data(), &found,
                                         &nsplit, w.data(), iblock.data(), isplit.data());
  if (info != 0 || found != 1) throw ConvergenceError("fd_oracle_eigenvalue: dstebz failed, info " + std::to_string(info));
  if (block) *block = iblock[0];
  if (split) std::copy(isplit.begin(), isplit.begin() + nsplit, split);
  return w[0];
}

inline void check_mesh(int mesh_points) {
  if (mesh_points < 64) throw DomainError("fd_oracle_eigenvalue: mesh too coarse (" + std::to_string(mesh_points) + " < 64)");
}

}  // namespace detail

/// Smallest eigenvalue of the symmetric finite-volume discretization of the
/// radial operator with weight sn^(n-1), Dirichlet at r and a zero-flux
/// closure at the center. Second-order accurate in the mesh width.
inline double fd_oracle_eigenvalue(const SpaceForm& sf, double r, int mesh_points) {
  detail::check_mesh(mesh_points);
  detail::check_ball_radius(sf, r, "fd_oracle_eigenvalue");
  const auto sys = detail::build_fd_system(sf.n, sf.kappa * r * r, mesh_points);
  return detail::smallest_tridiagonal_eigenvalue(sys) / (r * r);
}

/// One Richardson step on meshes m and 2m, cancelling the h^2 term.
inline double fd_oracle_richardson(const SpaceForm& sf, double r, int mesh_points) {
  const double coarse = fd_oracle_eigenvalue(sf, r, mesh_points);
  const double fine = fd_oracle_eigenvalue(sf, r, 2 * mesh_points);
  return (4.0 * fine - coarse) / 3.0;
}

inline FdGroundState fd_ground_state(const SpaceForm& sf, double r, int mesh_points) {
  detail::check_mesh(mesh_points);
  detail::check_ball_radius(sf, r, "fd_ground_state");
  const auto sys = detail::build_fd_system(sf.n, sf.kappa * r * r, mesh_points);
  const auto m = static_cast<lapack_int>(mesh_points);
  lapack_int block = 0;
  std::vector<lapack_int> split(m);
  const double mu = detail::smallest_tridiagonal_eigenvalue(sys, &block, split.data());

  // LAPACKE scans n entries of w and iblock, not just the first
  std::vector<double> w(m, mu), z(m);
  std::vector<lapack_int> blocks(m, block);
  lapack_int ifail = 0;
  const lapack_int info = LAPACKE_dstein(LAPACK_COL_MAJOR, m, sys.diag.data(), sys.offdiag.data(), 1, w.data(), blocks.data(),
                                         split.data(), z.data(), m, &ifail);
  if (info != 0) throw ConvergenceError("fd_ground_state: dstein failed, info " + std::to_string(info));

  FdGroundState gs;
  gs.eigenvalue = mu / (r * r);
  const double h = sys.h;
  const double rn = std::pow(r, sf.n);
  gs.nodes.resize(m);
  gs.values.resize(m);
  gs.value_weights.resize(m);
  gs.gradient_values.resize(m);
  gs.gradient_weights.resize(m);
  const double sign = z[0] < 0.0 ? -1.0 : 1.0;
  for (lapack_int i = 0; i < m; ++i) {
    gs.nodes[i] = r * i * h;
    gs.values[i] = sign * z[i] / std::sqrt(sys.volumes[i]);
    gs.value_weights[i] = rn * sys.volumes[i];
  }
  for (lapack_int i = 0; i < m; ++i) {
    const double next = i + 1 < m ? gs.values[i + 1] : 0.0;
    gs.gradient_values[i] = std::abs(next - gs.values[i]) / (h * r);
    gs.gradient_weights[i] = rn * sys.faces[i] * h;
  }
  return gs;
}

/// Discrete Rayleigh quotient sum(gw |grad|^2) / sum(vw f^2), with separate
/// quadrature weights for the gradient samples.
inline double rayleigh_quotient_discrete(std::span<const double> values, std::span<const double> value_weights,
                                         std::span<const double> gradient_norms,
                                         std::span<const double> gradient_weights) {
  if (values.size() != value_weights.size() || gradient_norms.size() != gradient_weights.size()) {
    throw DomainError("rayleigh_quotient_discrete: sample and weight lengths differ");
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) den += value_weights[i] * values[i] * values[i];
  for (std::size_t i = 0; i < gradient_norms.size(); ++i) num += gradient_weights[i] * gradient_norms[i] * gradient_norms[i];
  if (!(den > 0.0)) throw DomainError("rayleigh_quotient_discrete: function has zero L2 norm");
  return num / den;
}

/// Rayleigh quotient with values and gradients sampled at the same points.
inline double rayleigh_quotient_discrete(std::span<const double> values, std::span<const double> gradient_norms,
                                         std::span<const double> weights) {
  return rayleigh_quotient_discrete(values, weights, gradient_norms, weights);
}

}  // namespace orbispec

#endif  // ORBISPEC_DIRICHLET_HPP
