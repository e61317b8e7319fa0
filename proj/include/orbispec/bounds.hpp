#ifndef ORBISPEC_BOUNDS_HPP
#define ORBISPEC_BOUNDS_HPP

// Bound pipelines driven by a spectrum and a curvature lower bound: the
// spectral diameter bound, the isotropy order cap, and the cap on isolated
// singular points.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "orbispec/dirichlet.hpp"
#include "orbispec/errors.hpp"
#include "orbispec/modelspectra.hpp"
#include "orbispec/netpack.hpp"
#include "orbispec/spaceform.hpp"
#include "orbispec/weyl.hpp"

namespace orbispec {

// ---------------------------------------------------------------------------
// Diameter

struct DiameterBound {
  double diameter = 0.0;
  double r = 0.0;
  std::int64_t rho = 0;
  double threshold = 0.0;  // lambda^n_kappa(r)
};

inline double rho_tolerance(double threshold) { return 1e-9 * std::max(1.0, threshold); }

/// rho = N(lambda^n_kappa(r)) counted with a small absolute slack, and
/// D = 2 r (rho + 1), capped by pi/sqrt(kappa).
inline DiameterBound diameter_bound(const Spectrum& spec, double kappa, int n, double r,
                                    const ShootingConfig& cfg = {}) {
  spec.validate();
  const SpaceForm sf(n, kappa);
  if (!(r > 0.0)) throw DomainError("diameter_bound: r must be positive");
  if (kappa > 0.0 && !(r < bonnet_myers_cap(kappa))) throw DomainError("diameter_bound: r must be below pi/sqrt(kappa)");
  DiameterBound out;
  out.r = r;
  out.threshold = lowest_dirichlet_eigenvalue(sf, r, cfg);
  const double ceiling = out.threshold + rho_tolerance(out.threshold);
  if (ceiling > spec.truncation) {
    throw CertificationError("diameter", "lambda^" + std::to_string(n) + "_kappa(" + detail::fmt(r) + ") = " +
                                             detail::fmt(out.threshold) + " exceeds the spectrum truncation " +
                                             detail::fmt(spec.truncation));
  }
  out.rho = counting_function(spec, ceiling);
  out.diameter = std::min(2.0 * r * static_cast<double>(out.rho + 1), bonnet_myers_cap(kappa));
  return out;
}

/// 64 log-spaced radii over [D_hint / 1000, top], D_hint = 2 (v / omega_n)^(1/n),
/// top = (1 - 1e-3) pi/sqrt(kappa) for kappa > 0 and D_hint otherwise.
inline std::vector<double> default_r_grid(int n, double kappa, double v, int points = 64) {
  if (!(v > 0.0)) throw DomainError("default_r_grid: volume must be positive");
  if (points < 1) throw DomainError("default_r_grid: need at least one point");
  const double hint = 2.0 * std::pow(v / unit_ball_volume(n), 1.0 / n);
  const double top = kappa > 0.0 ? (1.0 - 1e-3) * bonnet_myers_cap(kappa) : hint;
  const double bottom = top / 1000.0;
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) {
    grid[i] = points == 1 ? top : std::exp(std::log(bottom) + (std::log(top) - std::log(bottom)) * i / (points - 1));
  }
  return grid;
}

/// Minimum of diameter_bound over the admissible grid points; ties go to the
/// smaller r.
inline DiameterBound best_diameter_bound(const Spectrum& spec, double kappa, int n, std::vector<double> r_grid,
                                         const ShootingConfig& cfg = {}) {
  if (r_grid.empty()) throw DomainError("best_diameter_bound: empty r grid");
  std::sort(r_grid.begin(), r_grid.end());
  std::optional<DiameterBound> best;
  std::string last_error;
  for (double r : r_grid) {
    try {
      const auto b = diameter_bound(spec, kappa, n, r, cfg);
      if (!best || b.diameter < best->diameter) best = b;
    } catch (const CertificationError& e) {
      last_error = e.what();
    } catch (const DomainError& e) {
      last_error = e.what();
    }
  }
  if (!best) throw CertificationError("diameter", "no admissible r in the grid (last: " + last_error + ")");
  return *best;
}

// ---------------------------------------------------------------------------
// Isotropy

/// floor(vol B^n_kappa(D) / v), at least 1.
inline std::int64_t isotropy_order_cap(int n, double kappa, double v, double diameter) {
  if (!(v > 0.0)) throw DomainError("isotropy_order_cap: volume must be positive");
  if (!(diameter > 0.0)) throw DomainError("isotropy_order_cap: diameter must be positive");
  const SpaceForm sf(n, kappa);
  return std::max<std::int64_t>(1, conservative_floor(ball_volume(sf, diameter) / v));
}

/// Variant taking the Weyl fit and checking it against the spectrum's
/// declared dimension.
inline std::int64_t isotropy_order_cap(const Spectrum& spec, double kappa, const WeylFit& fit, double diameter) {
  if (spec.dimension && *spec.dimension != fit.dimension) {
    throw DomainError("isotropy_order_cap: fit dimension " + std::to_string(fit.dimension) +
                      " differs from the spectrum's dimension " + std::to_string(*spec.dimension));
  }
  return isotropy_order_cap(fit.dimension, kappa, fit.volume, diameter);
}

struct IsotropyTypes {
  std::vector<std::string> groups;
  std::string note;
};

inline IsotropyTypes isotropy_type_enumeration(int n, std::int64_t cap) {
  IsotropyTypes out;
  if (n == 2) {
    for (std::int64_t k = 2; k <= cap; ++k) out.groups.push_back("C" + std::to_string(k));
    out.note = cap < 2 ? "no nontrivial isotropy possible: every such orbifold is a manifold"
                       : "orientable 2-orbifold: local groups are finite subgroups of SO(2), hence cyclic";
  } else {
    out.note = "dimension " + std::to_string(n) + ": only the order cap " + std::to_string(cap) +
               " is reported; finite subgroups of SO(" + std::to_string(n) + ") are not enumerated";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Constants for the singular-point cap

inline constexpr double kConstantsMargin = 1e-9;
inline constexpr double kSafetyShrink = 1.0 - 1e-6;

namespace detail {

inline double capped_length(double kappa, double length) { return std::min(length, bonnet_myers_cap(kappa)); }

}  // namespace detail

/// Volume of the radius-D cone over the directions at angle >= pi/2 - alpha
/// from both of two unit vectors at angle pi - 2 alpha.
inline double alpha_cone_volume(int n, double kappa, double diameter, double alpha) {
  const SpaceForm sf(n, kappa);
  const double dirs = two_cap_complement_measure(n - 1, alpha, kPi / 2.0 - alpha);
  return cone_volume(sf, detail::capped_length(kappa, diameter), dirs);
}

/// Largest alpha in (0, pi/2) whose cone volume stays below v/6 with a
/// relative margin. The cone grows with alpha: it is empty at alpha = 0 and
/// fills the whole ball at pi/2.
inline double alpha_constant(int n, double kappa, double diameter, double v) {
  if (!(v > 0.0)) throw DomainError("alpha_constant: volume must be positive");
  if (!(diameter > 0.0)) throw DomainError("alpha_constant: diameter must be positive");
  const double target = v / 6.0 * (1.0 - kConstantsMargin);
  auto ok = [&](double a) { return alpha_cone_volume(n, kappa, diameter, a) < target; };
  double lo = 0.0, hi = kPi / 2.0;
  if (ok(hi)) return hi * kSafetyShrink;
  for (int i = 0; i < 80 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  if (!(lo > 0.0)) throw CertificationError("alpha", "no admissible alpha for v = " + detail::fmt(v));
  return lo;
}

/// (1 - 1e-6) r0 where vol B^n_kappa(r0) = v / 3.
inline double ell_constant(int n, double kappa, double v) {
  if (!(v > 0.0)) throw DomainError("ell_constant: volume must be positive");
  const SpaceForm sf(n, kappa);
  const double target = v / 3.0;
  if (kappa > 0.0 && target > total_volume(sf)) {
    throw DomainError("ell_constant: v/3 exceeds the volume of M^n_kappa");
  }
  double hi = kappa > 0.0 ? bonnet_myers_cap(kappa) : 1.0;
  if (kappa <= 0.0) {
    while (ball_volume(sf, hi) < target) hi *= 2.0;
  }
  auto f = [&](double r) { return ball_volume(sf, r) - target; };
  if (f(hi) == 0.0) return hi * kSafetyShrink;
  boost::math::tools::eps_tolerance<double> tol(50);
  std::uintmax_t iters = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(f, 0.0, hi, -target, f(hi), tol, iters);
  return 0.5 * (a + b) * kSafetyShrink;
}

/// Largest r < ell (shrunk by 1e-6) such that every hinge with legs r and
/// c3 in [ell, Lmax] at angle theta in [0, pi/2 - alpha] has far side shorter
/// than c3, checked on a grid x grid mesh of (c3, theta).
inline double r_constant(int n, double kappa, double alpha, double ell, double l_max, int grid = 64) {
  (void)SpaceForm(n, kappa);
  if (!(alpha > 0.0 && alpha < kPi / 2.0)) throw DomainError("r_constant: alpha must lie in (0, pi/2)");
  if (!(ell > 0.0)) throw DomainError("r_constant: ell must be positive");
  if (!(l_max >= ell)) throw DomainError("r_constant: Lmax must be >= ell");
  if (grid < 2) throw DomainError("r_constant: grid must have at least 2 points");
  l_max = detail::capped_length(kappa, l_max);
  ell = std::min(ell, l_max);
  const double theta_max = kPi / 2.0 - alpha;
  auto ok = [&](double r) {
    for (int i = 0; i < grid; ++i) {
      const double c3 = ell + (l_max - ell) * i / (grid - 1);
      for (int j = 0; j < grid; ++j) {
        const double theta = theta_max * j / (grid - 1);
        if (!(law_of_cosines_side(kappa, r, c3, theta) < c3)) return false;
      }
    }
    return true;
  };
  double lo = 0.0, hi = ell;
  if (ok(hi)) return hi * kSafetyShrink;
  for (int i = 0; i < 80 && hi - lo > 1e-15 * ell; ++i) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  if (!(lo > 0.0)) throw CertificationError("r", "no positive separation radius certified");
  return lo * kSafetyShrink;
}

struct SingularCap {
  std::int64_t cap = 0;
  double alpha = 0.0;
  double ell = 0.0;
  double r = 0.0;
};

namespace detail {

template <class F>
auto in_stage(const std::string& stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const CertificationError&) {
    throw;
  } catch (const std::exception& e) {
    throw CertificationError(stage, e.what());
  }
}

}  // namespace detail

/// floor(vol B^n_kappa(D) / vol B^n_kappa(r/4)) with r from r_constant.
inline SingularCap singular_point_cap(int n, double kappa, double diameter, double v, int grid = 64) {
  SingularCap out;
  diameter = detail::capped_length(kappa, diameter);
  out.alpha = detail::in_stage("alpha", [&] { return alpha_constant(n, kappa, diameter, v); });
  out.ell = detail::in_stage("ell", [&] { return ell_constant(n, kappa, v); });
  out.r = detail::in_stage("r", [&] {
    return r_constant(n, kappa, out.alpha, out.ell, std::max(diameter, out.ell), grid);
  });
  out.cap = detail::in_stage("singular", [&] {
    const SpaceForm sf(n, kappa);
    return conservative_floor(ball_volume(sf, diameter) / ball_volume(sf, out.r / 4.0));
  });
  return out;
}

// ---------------------------------------------------------------------------
// Reports

/// FNV-1a over the spectrum's numeric content, so that two encodings of the
/// same spectrum share an id.
inline std::string spectrum_fingerprint(const Spectrum& spec) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 1099511628211ULL;
    }
  };
  auto mix_double = [&mix](double x) {
    if (x == 0.0) x = 0.0;
    std::uint64_t bits;
    std::memcpy(&bits, &x, sizeof bits);
    mix(&bits, sizeof bits);
  };
  mix_double(spec.truncation);
  for (const auto& e : spec.entries) {
    mix_double(e.value);
    mix(&e.multiplicity, sizeof e.multiplicity);
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return "fnv1a:" + os.str();
}

struct StageRecord {
  std::string stage;
  std::map<std::string, double> inputs;
  std::map<std::string, double> outputs;
};

struct BoundReport {
  std::string spectrum_id;
  double kappa = 0.0;
  int n = 0;
  double v = 0.0;
  std::string source;  // "given" or "weyl-estimated"
  std::optional<WeylFit> weyl;
  double diameter = 0.0;
  double r_used = 0.0;
  std::int64_t rho = 0;
  std::int64_t isotropy_cap = 0;
  IsotropyTypes isotropy_types;
  std::optional<double> alpha;
  std::optional<double> ell;
  std::optional<double> r_sep;
  std::optional<std::int64_t> singular_cap;
  std::vector<std::string> notes;
  std::vector<StageRecord> stage_trace;
};

struct PipelineOptions {
  std::optional<int> n;
  std::optional<double> v;
  std::optional<std::vector<double>> r_grid;
  int r_grid_points = 64;
  WeylOptions weyl;
  double weyl_volume_factor = 0.9;  // applied to Weyl estimates only
  int constants_grid = 64;
  ShootingConfig shooting;
};

namespace detail {

inline BoundReport bound_pipeline(const Spectrum& spec, double kappa, const PipelineOptions& opt, bool singular) {
  if (!std::isfinite(kappa)) throw DomainError("kappa must be finite");
  BoundReport rep;
  rep.kappa = kappa;
  in_stage("input", [&] { spec.validate(); });
  rep.spectrum_id = spectrum_fingerprint(spec);

  in_stage("weyl", [&] {
    if (opt.n && spec.dimension && *opt.n != *spec.dimension) {
      throw DomainError("supplied n = " + std::to_string(*opt.n) + " contradicts the spectrum's dimension " +
                        std::to_string(*spec.dimension));
    }
    StageRecord st{"weyl", {}, {}};
    if (opt.n && opt.v) {
      rep.n = *opt.n;
      rep.v = *opt.v;
      rep.source = "given";
      rep.notes.push_back("n and v supplied by the caller");
    } else {
      WeylFit fit;
      if (opt.n) {
        fit = fit_dimension(spec, opt.weyl);
        fit.dimension = *opt.n;
        fit.volume = estimate_volume(spec, *opt.n, opt.weyl);
      } else {
        fit = weyl_fit(spec, opt.weyl);
      }
      rep.weyl = fit;
      rep.n = fit.dimension;
      if (opt.v) {
        rep.v = *opt.v;
        rep.source = "given";
        rep.notes.push_back("v supplied by the caller; n from the Weyl fit");
      } else {
        rep.v = fit.volume * opt.weyl_volume_factor;
        rep.source = "weyl-estimated";
        rep.notes.push_back("v = " + fmt(opt.weyl_volume_factor) + " x Weyl volume estimate (lower bound with slack)");
      }
      st.inputs = {{"window_low_fraction", opt.weyl.window_low_fraction}, {"samples", opt.weyl.samples}};
      st.outputs = {{"dimension", fit.dimension}, {"volume_estimate", fit.volume}, {"residual", fit.residual},
                    {"slope", fit.slope}};
    }
    if (rep.n < 2) throw DomainError("dimension must be >= 2, got " + std::to_string(rep.n));
    if (!(rep.v > 0.0)) throw DomainError("volume must be positive");
    st.outputs["n"] = rep.n;
    st.outputs["v"] = rep.v;
    rep.stage_trace.push_back(std::move(st));
  });

  in_stage("diameter", [&] {
    const auto grid = opt.r_grid ? *opt.r_grid : default_r_grid(rep.n, kappa, rep.v, opt.r_grid_points);
    const auto best = best_diameter_bound(spec, kappa, rep.n, grid, opt.shooting);
    rep.diameter = best.diameter;
    rep.r_used = best.r;
    rep.rho = best.rho;
    rep.notes.push_back("D = min(2 r (rho + 1), pi/sqrt(kappa)) minimized over " + std::to_string(grid.size()) +
                        " radii; rho counts eigenvalues within 1e-9 relative of lambda^n_kappa(r)");
    rep.stage_trace.push_back({"diameter",
                               {{"kappa", kappa}, {"n", rep.n}, {"grid_points", static_cast<double>(grid.size())}},
                               {{"D", best.diameter}, {"r", best.r}, {"rho", static_cast<double>(best.rho)},
                                {"lambda_threshold", best.threshold}}});
  });

  in_stage("isotropy", [&] {
    rep.isotropy_cap = isotropy_order_cap(rep.n, kappa, rep.v, rep.diameter);
    rep.isotropy_types = isotropy_type_enumeration(rep.n, rep.isotropy_cap);
    rep.notes.push_back("isotropy cap = floor(vol B^n_kappa(D) / v)");
    rep.stage_trace.push_back({"isotropy",
                               {{"D", rep.diameter}, {"v", rep.v}},
                               {{"cap", static_cast<double>(rep.isotropy_cap)}}});
  });

  if (singular) {
    const auto sc = singular_point_cap(rep.n, kappa, rep.diameter, rep.v, opt.constants_grid);
    rep.alpha = sc.alpha;
    rep.ell = sc.ell;
    rep.r_sep = sc.r;
    rep.singular_cap = sc.cap;
    rep.notes.push_back("alpha: largest bisection-certified angle with cone volume < v/6 (relative margin 1e-9)");
    rep.notes.push_back("ell: vol B^n_kappa(ell / (1 - 1e-6)) = v/3");
    rep.notes.push_back("r: hinge condition certified on a " + std::to_string(opt.constants_grid) + "^2 grid, shrunk by 1e-6");
    rep.notes.push_back("singular cap = floor(vol B^n_kappa(D) / vol B^n_kappa(r/4))");
    rep.stage_trace.push_back({"singular",
                               {{"D", rep.diameter}, {"v", rep.v}, {"n", rep.n}, {"kappa", kappa}},
                               {{"alpha", sc.alpha}, {"ell", sc.ell}, {"r", sc.r}, {"cap", static_cast<double>(sc.cap)}}});
  }
  return rep;
}

}  // namespace detail

/// Weyl fit, best diameter bound and isotropy order cap.
inline BoundReport main_theorem_1(const Spectrum& spec, double kappa, const PipelineOptions& opt = {}) {
  return detail::bound_pipeline(spec, kappa, opt, false);
}

/// Everything in main_theorem_1 plus the cap on isolated singular points.
inline BoundReport main_theorem_2(const Spectrum& spec, double kappa, const PipelineOptions& opt = {}) {
  return detail::bound_pipeline(spec, kappa, opt, true);
}

}  // namespace orbispec

#endif  // ORBISPEC_BOUNDS_HPP
