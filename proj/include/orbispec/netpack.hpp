#ifndef ORBISPEC_NETPACK_HPP
#define ORBISPEC_NETPACK_HPP

// Minimal epsilon-nets on finite metric spaces and the volume-comparison
// bound on their size.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "orbispec/errors.hpp"
#include "orbispec/modelspectra.hpp"
#include "orbispec/spaceform.hpp"

namespace orbispec {

inline constexpr double kMetricTol = 1e-9;

class FiniteMetricSpace {
 public:
  /// Row-major n x n distance matrix; validated as a metric up to 1e-9.
  FiniteMetricSpace(std::size_t n, std::vector<double> dist) : n_(n), dist_(std::move(dist)) {
    if (n_ == 0) throw DomainError("FiniteMetricSpace: needs at least one point");
    if (dist_.size() != n_ * n_) throw DomainError("FiniteMetricSpace: distance matrix has the wrong size");
    for (std::size_t i = 0; i < n_; ++i) {
      if (std::abs(at(i, i)) > kMetricTol) throw DomainError("FiniteMetricSpace: nonzero diagonal at " + std::to_string(i));
      for (std::size_t j = i + 1; j < n_; ++j) {
        const double d = at(i, j);
        if (!std::isfinite(d) || std::abs(d - at(j, i)) > kMetricTol) throw DomainError("FiniteMetricSpace: not symmetric");
        if (d <= kMetricTol) {
          throw DomainError("FiniteMetricSpace: points " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
        }
      }
    }
    for (std::size_t k = 0; k < n_; ++k) {
      for (std::size_t i = 0; i < n_; ++i) {
        const double dik = at(i, k);
        for (std::size_t j = 0; j < n_; ++j) {
          if (at(i, j) > dik + at(k, j) + kMetricTol) {
            throw DomainError("FiniteMetricSpace: triangle inequality fails at (" + std::to_string(i) + ", " +
                              std::to_string(j) + ", " + std::to_string(k) + ")");
          }
        }
      }
    }
  }

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return at(i, j); }
  const std::vector<double>& matrix() const { return dist_; }

 private:
  double at(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }

  std::size_t n_;
  std::vector<double> dist_;
};

/// Farthest-point-first net: starts at point 0 and keeps adding the point
/// farthest from the current net until every point lies within open distance
/// eps. Centers are pairwise >= eps apart, so the eps/2-balls are disjoint.
inline std::vector<std::size_t> greedy_minimal_net(const FiniteMetricSpace& space, double eps) {
  if (!(eps > 0.0)) throw DomainError("greedy_minimal_net: eps must be positive");
  std::vector<std::size_t> net{0};
  std::vector<double> gap(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) gap[i] = space(0, i);
  while (true) {
    const auto far = static_cast<std::size_t>(std::max_element(gap.begin(), gap.end()) - gap.begin());
    if (gap[far] < eps) break;
    net.push_back(far);
    for (std::size_t i = 0; i < space.size(); ++i) gap[i] = std::min(gap[i], space(far, i));
  }
  return net;
}

struct NetCheck {
  bool ok = true;
  std::vector<std::size_t> uncovered;                        // points with no center within eps
  std::vector<std::pair<std::size_t, std::size_t>> close;    // centers closer than eps
};

inline NetCheck verify_net(const FiniteMetricSpace& space, double eps, const std::vector<std::size_t>& net) {
  NetCheck check;
  for (std::size_t c : net) {
    if (c >= space.size()) throw DomainError("verify_net: center index out of range");
  }
  for (std::size_t i = 0; i < space.size(); ++i) {
    const bool covered = std::any_of(net.begin(), net.end(), [&](std::size_t c) { return space(c, i) < eps; });
    if (!covered) check.uncovered.push_back(i);
  }
  for (std::size_t a = 0; a < net.size(); ++a) {
    for (std::size_t b = a + 1; b < net.size(); ++b) {
      if (space(net[a], net[b]) < eps) check.close.emplace_back(net[a], net[b]);
    }
  }
  check.ok = check.uncovered.empty() && check.close.empty();
  return check;
}

/// Largest integer <= x, treating values within relative 1e-9 below an
/// integer as that integer. Rounding can then only raise a cap.
inline std::int64_t conservative_floor(double x) {
  return static_cast<std::int64_t>(std::floor(x + 1e-9 * std::max(1.0, std::abs(x))));
}

/// floor(vol B^n_kappa(D) / vol B^n_kappa(eps/2)): the number of disjoint
/// eps/2-balls that fit in a space of diameter <= D with curvature >= kappa.
inline std::int64_t packing_bound(int n, double kappa, double diameter, double eps) {
  if (!(eps > 0.0) || eps > 2.0 * diameter * (1.0 + 1e-12)) throw DomainError("packing_bound: need 0 < eps <= 2 D");
  const SpaceForm sf(n, kappa);
  return conservative_floor(ball_volume(sf, diameter) / ball_volume(sf, 0.5 * eps));
}

// ---------------------------------------------------------------------------
// Closed-form geodesic distances on catalog models.

using Point = Eigen::VectorXd;

/// Distance between two points of a catalog model, given by representatives
/// in the covering sphere (unit vectors) or covering R^n.
inline double model_distance(const ModelOrbifold& model, const Point& x, const Point& y) {
  switch (model.kind) {
    case ModelKind::round_sphere:
      return std::acos(std::clamp(x.dot(y), -1.0, 1.0));
    case ModelKind::sphere_quotient: {
      double best = kPi;
      for (const auto& g : model.action->elements()) best = std::min(best, std::acos(std::clamp(x.dot(g * y), -1.0, 1.0)));
      return best;
    }
    case ModelKind::flat_torus:
    case ModelKind::torus_quotient: {
      const Matrix& b = model.lattice;
      const Matrix b_inv = b.inverse();
      const auto n = static_cast<int>(b.cols());
      std::vector<Matrix> group{Matrix::Identity(n, n)};
      if (model.action) group = model.action->elements();
      double best = std::numeric_limits<double>::infinity();
      for (const auto& g : group) {
        const Point diff = x - g * y;
        const Eigen::VectorXd coords = b_inv * diff;
        const Eigen::VectorXd base = coords.array().round();
        // nearest translate among the 3^n neighbours of the rounded cell
        Eigen::VectorXi shift = Eigen::VectorXi::Constant(n, -1);
        while (true) {
          const Point d = diff - b * (base + shift.cast<double>());
          best = std::min(best, d.norm());
          int i = 0;
          while (i < n && shift(i) == 1) shift(i++) = -1;
          if (i == n) break;
          ++shift(i);
        }
      }
      return best;
    }
  }
  throw DomainError("model_distance: unknown model kind");
}

/// Points drawn uniformly from the model's cover (uniform on the sphere or on
/// the torus fundamental cell); their images are uniform on the quotient.
inline std::vector<Point> sample_model_points(const ModelOrbifold& model, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Point> pts;
  pts.reserve(count);
  if (model.kind == ModelKind::round_sphere || model.kind == ModelKind::sphere_quotient) {
    std::normal_distribution<double> normal;
    for (std::size_t i = 0; i < count; ++i) {
      Point p(model.dimension + 1);
      for (Eigen::Index j = 0; j < p.size(); ++j) p(j) = normal(rng);
      pts.push_back(p / p.norm());
    }
  } else {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < count; ++i) {
      Eigen::VectorXd c(model.dimension);
      for (Eigen::Index j = 0; j < c.size(); ++j) c(j) = unit(rng);
      pts.push_back(model.lattice * c);
    }
  }
  return pts;
}

inline FiniteMetricSpace model_metric_space(const ModelOrbifold& model, const std::vector<Point>& pts) {
  const std::size_t n = pts.size();
  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = model_distance(model, pts[i], pts[j]);
      dist[i * n + j] = d;
      dist[j * n + i] = d;
    }
  }
  return FiniteMetricSpace(n, std::move(dist));
}

}  // namespace orbispec

#endif  // ORBISPEC_NETPACK_HPP
