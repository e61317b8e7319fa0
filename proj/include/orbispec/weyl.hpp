#ifndef ORBISPEC_WEYL_HPP
#define ORBISPEC_WEYL_HPP

// Dimension and volume from a truncated spectrum via Weyl's law
//   N(lambda) ~ vol(B^n_0(1)) vol(O) lambda^{n/2} / (2 pi)^n.

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "orbispec/errors.hpp"
#include "orbispec/modelspectra.hpp"
#include "orbispec/spaceform.hpp"

namespace orbispec {

struct WeylOptions {
  double window_low_fraction = 0.25;  // window = [fraction * lambda_max, lambda_max]
  int samples = 256;                  // log-spaced evaluation points in the window
  std::int64_t min_count = 100;
  double max_slope_defect = 0.25;
};

struct WeylFit {
  int dimension = 0;
  double volume = 0.0;
  std::pair<double, double> window{0.0, 0.0};
  double residual = 0.0;      // RMS of the log-log fit
  double slope = 0.0;         // unsnapped d log N / d log lambda
  double slope_defect = 0.0;  // |2 slope - dimension|
};

namespace detail {

inline std::pair<double, double> weyl_window(const Spectrum& spec, const WeylOptions& opt) {
  spec.validate();
  if (spec.total_count() < opt.min_count) {
    throw DomainError("weyl: too few eigenvalues (" + std::to_string(spec.total_count()) + " < " +
                      std::to_string(opt.min_count) + ")");
  }
  const double hi = spec.truncation;
  const double lo = opt.window_low_fraction * hi;
  if (!(lo > 0.0 && lo < hi)) throw DomainError("weyl: empty fit window");
  return {lo, hi};
}

inline std::vector<double> log_grid(double lo, double hi, int samples) {
  std::vector<double> g(samples);
  for (int i = 0; i < samples; ++i) {
    g[i] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (samples - 1));
  }
  g.back() = hi;
  return g;
}

}  // namespace detail

/// Least-squares slope s of log N vs log lambda over the tail window, with
/// the dimension round(2 s). Fills everything in WeylFit except the volume.
inline WeylFit fit_dimension(const Spectrum& spec, const WeylOptions& opt = {}) {
  const auto [lo, hi] = detail::weyl_window(spec, opt);
  const auto grid = detail::log_grid(lo, hi, opt.samples);
  std::vector<double> xs, ys;
  for (double lam : grid) {
    xs.push_back(std::log(lam));
    ys.push_back(std::log(static_cast<double>(counting_function(spec, lam))));
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = sxy / sxx;
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (my + slope * (xs[i] - mx));
    rss += e * e;
  }

  WeylFit fit;
  fit.window = {lo, hi};
  fit.slope = slope;
  fit.dimension = static_cast<int>(std::lround(2.0 * slope));
  fit.slope_defect = std::abs(2.0 * slope - fit.dimension);
  fit.residual = std::sqrt(rss / n);
  if (fit.slope_defect > opt.max_slope_defect || fit.dimension < 1) {
    throw DomainError("estimate_dimension: log-log slope " + detail::fmt(2.0 * slope) + " is not near an integer");
  }
  return fit;
}

inline int estimate_dimension(const Spectrum& spec, const WeylOptions& opt = {}) { return fit_dimension(spec, opt).dimension; }

/// Volume from the ratio of integrals over the tail window of N(lambda) and
/// of the Weyl term vol B^n_0(1) lambda^{n/2} / (2 pi)^n. N is replaced by the
/// piecewise-linear curve through the middle of each jump, and the window is
/// trimmed to the first and last level inside it. Point samples (median or
/// not) pick up the sawtooth and lattice oscillation at random phase.
inline double estimate_volume(const Spectrum& spec, int n, const WeylOptions& opt = {}) {
  if (n < 1) throw DomainError("estimate_volume: dimension must be >= 1");
  const auto [lo, hi] = detail::weyl_window(spec, opt);
  std::vector<std::pair<double, double>> nodes;
  std::int64_t below = 0;
  for (const auto& e : spec.entries) {
    if (e.value >= lo && e.value <= hi) nodes.emplace_back(e.value, static_cast<double>(below) + 0.5 * static_cast<double>(e.multiplicity));
    below += e.multiplicity;
  }
  if (nodes.size() < 2) throw DomainError("estimate_volume: empty window (fewer than two levels)");
  double area = 0.0;
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    area += 0.5 * (nodes[i].second + nodes[i - 1].second) * (nodes[i].first - nodes[i - 1].first);
  }
  const double a = nodes.front().first, b = nodes.back().first;
  const double p = 0.5 * n + 1.0;
  const double weyl = sphere_measure(n - 1) / n / std::pow(2.0 * kPi, n) * (std::pow(b, p) - std::pow(a, p)) / p;
  return area / weyl;
}

inline WeylFit weyl_fit(const Spectrum& spec, const WeylOptions& opt = {}) {
  WeylFit fit = fit_dimension(spec, opt);
  if (spec.dimension && *spec.dimension != fit.dimension) {
    throw DomainError("weyl_fit: estimated dimension " + std::to_string(fit.dimension) +
                      " contradicts the spectrum's declared dimension " + std::to_string(*spec.dimension));
  }
  fit.volume = estimate_volume(spec, fit.dimension, opt);
  return fit;
}

}  // namespace orbispec

#endif  // ORBISPEC_WEYL_HPP
