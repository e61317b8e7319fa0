#ifndef ORBISPEC_SPACEFORM_HPP
#define ORBISPEC_SPACEFORM_HPP

// Geometry of the simply connected space forms M^n_kappa: the warping
// function sn_kappa, ball and cone volumes, cap measures on round spheres,
// and the constant-curvature law of cosines.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "orbispec/errors.hpp"

namespace orbispec {

inline constexpr double kPi = std::numbers::pi;

/// Below this value of |kappa| * r^2 the trigonometric forms are replaced by
/// their Taylor expansions.
inline constexpr double kNearFlat = 1e-8;

/// Drift allowed on clamped arguments (arccos inputs, the spherical cap).
inline constexpr double kClampDrift = 1e-12;

struct SpaceForm {
  int n = 2;
  double kappa = 0.0;

  SpaceForm() = default;
  SpaceForm(int dim, double curvature) : n(dim), kappa(curvature) {
    if (n < 2) throw DomainError("SpaceForm: dimension must be >= 2");
    if (!std::isfinite(kappa)) throw DomainError("SpaceForm: curvature must be finite");
  }

  bool operator==(const SpaceForm&) const = default;
};

/// pi / sqrt(kappa) for kappa > 0, +infinity otherwise.
inline double bonnet_myers_cap(double kappa) {
  if (kappa > 0.0) return kPi / std::sqrt(kappa);
  return std::numeric_limits<double>::infinity();
}

namespace detail {

inline std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// Validates a radius against the spherical cap and returns it, snapped to
// the cap when it overshoots by rounding only.
inline double checked_radius(double kappa, double r, const char* who) {
  if (!(r >= 0.0)) throw DomainError(std::string(who) + ": radius must be >= 0, got " + fmt(r));
  if (kappa > 0.0) {
    const double cap = bonnet_myers_cap(kappa);
    if (r > cap * (1.0 + kClampDrift)) {
      throw DomainError(std::string(who) + ": radius " + fmt(r) + " exceeds pi/sqrt(kappa) = " + fmt(cap));
    }
    r = std::min(r, cap);
  }
  return r;
}

inline double check_angle(double theta, double hi, const char* who) {
  if (!(theta >= -kClampDrift && theta <= hi + kClampDrift)) {
    throw DomainError(std::string(who) + ": angle " + fmt(theta) + " outside [0, " + fmt(hi) + "]");
  }
  return std::clamp(theta, 0.0, hi);
}

inline double sn_unchecked(double kappa, double r) {
  const double q = kappa * r * r;
  if (std::abs(q) < kNearFlat) return r * (1.0 - q / 6.0 + q * q / 120.0);
  if (kappa > 0.0) {
    const double s = std::sqrt(kappa);
    return std::max(0.0, std::sin(s * r) / s);
  }
  const double s = std::sqrt(-kappa);
  return std::sinh(s * r) / s;
}

// d/dr sn_kappa(r).
inline double cs_unchecked(double kappa, double r) {
  const double q = kappa * r * r;
  if (std::abs(q) < kNearFlat) return 1.0 - q / 2.0 + q * q / 24.0;
  if (kappa > 0.0) return std::cos(std::sqrt(kappa) * r);
  return std::cosh(std::sqrt(-kappa) * r);
}

// \int_0^r sn_kappa(t)^(m-1) dt for m >= 1 (m = 1 gives r). Closed forms for
// m <= 2, adaptive Gauss-Kronrod otherwise.
inline double radial_integral(int m, double kappa, double r) {
  if (r == 0.0) return 0.0;
  if (m == 1) return r;
  const double q = kappa * r * r;
  if (m == 2) {
    if (std::abs(q) < kNearFlat) return 0.5 * r * r * (1.0 - q / 12.0 + q * q / 360.0);
    if (kappa > 0.0) {
      const double h = std::sin(0.5 * std::sqrt(kappa) * r);
      return 2.0 * h * h / kappa;
    }
    const double h = std::sinh(0.5 * std::sqrt(-kappa) * r);
    return -2.0 * h * h / kappa;
  }
  if (m == 3 && std::abs(q) > 1e-3) {
    if (kappa > 0.0) {
      const double s = std::sqrt(kappa);
      return (r - std::sin(2.0 * s * r) / (2.0 * s)) / (2.0 * kappa);
    }
    const double s = std::sqrt(-kappa);
    return (std::sinh(2.0 * s * r) / (2.0 * s) - r) / (-2.0 * kappa);
  }
  auto integrand = [m, kappa](double t) { return std::pow(sn_unchecked(kappa, t), m - 1); };
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, r, 20, 1e-13, &err);
}

}  // namespace detail

/// sin(sqrt(k) r)/sqrt(k), r, or sinh(sqrt(-k) r)/sqrt(-k) by the sign of k.
inline double snk(double kappa, double r) {
  r = detail::checked_radius(kappa, r, "snk");
  return detail::sn_unchecked(kappa, r);
}

/// Round measure of the unit sphere S^d; omega(1) = 2 pi, omega(2) = 4 pi.
inline double sphere_measure(int d) {
  if (d < 0) throw DomainError("sphere_measure: dimension must be >= 0");
  double w = (d % 2 == 0) ? 2.0 : 2.0 * kPi;
  for (int k = (d % 2 == 0) ? 2 : 3; k <= d; k += 2) w *= 2.0 * kPi / (k - 1);
  return w;
}

/// Volume of the Euclidean unit ball in R^n.
inline double unit_ball_volume(int n) { return sphere_measure(n - 1) / n; }

/// Volume of the geodesic r-ball B^n_kappa(r).
inline double ball_volume(const SpaceForm& sf, double r) {
  r = detail::checked_radius(sf.kappa, r, "ball_volume");
  return sphere_measure(sf.n - 1) * detail::radial_integral(sf.n, sf.kappa, r);
}

/// Volume of M^n_kappa for kappa > 0, +infinity otherwise.
inline double total_volume(const SpaceForm& sf) {
  if (sf.kappa <= 0.0) return std::numeric_limits<double>::infinity();
  return ball_volume(sf, bonnet_myers_cap(sf.kappa));
}

/// Measure of the open cap of angular radius theta on the round sphere S^d.
inline double cap_measure(int d, double theta) {
  if (d < 1) throw DomainError("cap_measure: sphere dimension must be >= 1");
  theta = detail::check_angle(theta, kPi, "cap_measure");
  return sphere_measure(d - 1) * detail::radial_integral(d, 1.0, theta);
}

/// Measure on S^d of {u : angle(u, v) >= theta and angle(u, w) >= theta} for
/// unit vectors v, w at angle pi - 2 alpha.
///
/// The set depends on u only through its projection (x, y) onto span(v, w),
/// whose law under the round measure has density proportional to
/// (1 - x^2 - y^2)^((d - 3)/2) on the unit disk. In polar coordinates the
/// radial mass integrates in closed form, leaving a one-dimensional integral
/// over the in-plane direction that is split at every kink of the integrand.
inline double two_cap_complement_measure(int d, double alpha, double theta) {
  if (d < 1) throw DomainError("two_cap_complement_measure: sphere dimension must be >= 1");
  alpha = detail::check_angle(alpha, kPi / 2.0, "two_cap_complement_measure(alpha)");
  theta = detail::check_angle(theta, kPi, "two_cap_complement_measure(theta)");

  // cos(pi/2) is not exactly zero in floating point; snap it so that the
  // antipodal configuration gives an exactly empty set.
  const double t = std::abs(theta - kPi / 2.0) < 1e-15 ? 0.0 : std::cos(theta);
  const double half = kPi / 2.0 - alpha;
  const std::array<double, 2> centers{half, -half};

  // Admissible in-plane radii [lo, hi] along direction phi.
  auto radial_interval = [&](double phi) {
    double lo = 0.0, hi = 1.0;
    for (double c0 : centers) {
      const double c = std::cos(phi - c0);
      if (c > 0.0) {
        hi = std::min(hi, t / c);
      } else if (c < 0.0) {
        lo = std::max(lo, t / c);
      } else if (t < 0.0) {
        hi = -1.0;
      }
    }
    return std::pair{lo, hi};
  };

  std::vector<double> cuts{0.0, 2.0 * kPi};
  auto add_cut = [&cuts](double phi) {
    phi = std::fmod(phi, 2.0 * kPi);
    if (phi < 0.0) phi += 2.0 * kPi;
    cuts.push_back(phi);
  };
  for (double c0 : centers) {
    add_cut(c0 + theta);
    add_cut(c0 - theta);
    add_cut(c0 + kPi / 2.0);
    add_cut(c0 - kPi / 2.0);
  }
  add_cut(0.0);
  add_cut(kPi);
  std::sort(cuts.begin(), cuts.end());

  if (d == 1) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double a = cuts[i], b = cuts[i + 1];
      if (b - a <= 0.0) continue;
      const double mid = 0.5 * (a + b);
      bool inside = true;
      for (double c0 : centers) inside = inside && std::cos(mid - c0) <= t;
      if (inside) total += b - a;
    }
    return total;
  }

  // Radial mass \int_0^rho (1 - s^2)^((d-3)/2) s ds, times (d - 1).
  const double expo = 0.5 * (d - 1);
  auto radial_mass = [expo](double rho) {
    rho = std::clamp(rho, 0.0, 1.0);
    return -std::expm1(expo * std::log1p(-rho * rho));
  };
  auto integrand = [&](double phi) {
    const auto [lo, hi] = radial_interval(phi);
    if (hi <= lo) return 0.0;
    return radial_mass(hi) - radial_mass(lo);
  };

  boost::math::quadrature::tanh_sinh<double> integrator;
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    if (b - a <= 1e-15) continue;
    sum += integrator.integrate(integrand, a, b, 1e-13);
  }
  // 2 pi / (d - 1) * (d - 1) normalizes the disk law to total mass 2 pi.
  return sphere_measure(d) * sum / (2.0 * kPi);
}

/// Volume of the cone of radius r in M^n_kappa over a direction set of round
/// measure `direction_measure` in the unit tangent sphere S^(n-1).
inline double cone_volume(const SpaceForm& sf, double r, double direction_measure) {
  r = detail::checked_radius(sf.kappa, r, "cone_volume");
  const double full = sphere_measure(sf.n - 1);
  if (!(direction_measure >= 0.0) || direction_measure > full * (1.0 + kClampDrift)) {
    throw DomainError("cone_volume: direction measure " + detail::fmt(direction_measure) + " outside [0, " +
                      detail::fmt(full) + "]");
  }
  return direction_measure * detail::radial_integral(sf.n, sf.kappa, r);
}

/// Far side of the hinge with legs a, b and angle gamma in M^2_kappa.
///
/// Uses the haversine forms of the spherical and hyperbolic laws of cosines,
/// which have no cancellation for short sides, and the first-order curvature
/// expansion c^2 = c_0^2 - (kappa/3) a^2 b^2 sin^2(gamma) near kappa = 0.
inline double law_of_cosines_side(double kappa, double a, double b, double gamma) {
  if (!std::isfinite(kappa)) throw DomainError("law_of_cosines_side: curvature must be finite");
  a = detail::checked_radius(kappa, a, "law_of_cosines_side");
  b = detail::checked_radius(kappa, b, "law_of_cosines_side");
  gamma = detail::check_angle(gamma, kPi, "law_of_cosines_side");

  const double sh = std::sin(0.5 * gamma);
  const double longest = std::max(a, b);
  if (std::abs(kappa) * longest * longest < kNearFlat) {
    const double sg = std::sin(gamma);
    const double c2 = (a - b) * (a - b) + 4.0 * a * b * sh * sh - kappa / 3.0 * a * a * b * b * sg * sg;
    return std::sqrt(std::max(0.0, c2));
  }
  if (kappa > 0.0) {
    const double s = std::sqrt(kappa);
    const double d = std::sin(0.5 * (a - b) * s);
    double h = d * d + std::sin(a * s) * std::sin(b * s) * sh * sh;
    if (h < -kClampDrift || h > 1.0 + kClampDrift) {
      throw DomainError("law_of_cosines_side: haversine " + detail::fmt(h) + " drifted outside [0, 1]");
    }
    h = std::clamp(h, 0.0, 1.0);
    return 2.0 * std::asin(std::sqrt(h)) / s;
  }
  const double s = std::sqrt(-kappa);
  const double d = std::sinh(0.5 * (a - b) * s);
  const double h = d * d + std::sinh(a * s) * std::sinh(b * s) * sh * sh;
  return 2.0 * std::asinh(std::sqrt(std::max(0.0, h))) / s;
}

}  // namespace orbispec

#endif  // ORBISPEC_SPACEFORM_HPP
