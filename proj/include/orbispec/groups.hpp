#ifndef ORBISPEC_GROUPS_HPP
#define ORBISPEC_GROUPS_HPP

// Finite orthogonal group actions on spheres, their orbits, and the
// open-hemisphere test.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "orbispec/errors.hpp"
#include "orbispec/spaceform.hpp"

namespace orbispec {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Block-diagonal rotation diag(e^{2 pi i/l}, e^{2 pi i a_1/l}, ...) on C^m.
struct CyclicBlock {
  int order = 1;
  std::vector<int> exponents;  // a_1, ..., a_{m-1}; the first block has exponent 1
};

inline constexpr double kOrthogonalityTol = 1e-12;
inline constexpr double kOrbitDedupTol = 1e-9;
inline constexpr int kMaxGroupOrder = 20000;

class OrthogonalAction {
 public:
  /// Closes the group generated by `generators` (all of one size, orthogonal).
  static OrthogonalAction from_generators(std::vector<Matrix> generators) {
    if (generators.empty()) throw DomainError("OrthogonalAction: need at least one generator");
    const auto dim = generators.front().rows();
    for (const auto& g : generators) {
      if (g.rows() != dim || g.cols() != dim) throw DomainError("OrthogonalAction: generators must be square and of one size");
      const double defect = (g.transpose() * g - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
      if (defect > kOrthogonalityTol) {
        throw DomainError("OrthogonalAction: generator is not orthogonal (defect " + detail::fmt(defect) + ")");
      }
    }
    OrthogonalAction action;
    action.generators_ = std::move(generators);
    action.elements_ = close_group(action.generators_);
    return action;
  }

  int ambient_dim() const { return static_cast<int>(generators_.front().rows()); }
  int order() const { return static_cast<int>(elements_.size()); }
  const std::vector<Matrix>& generators() const { return generators_; }
  /// Every group element; the identity comes first.
  const std::vector<Matrix>& elements() const { return elements_; }
  const std::optional<CyclicBlock>& cyclic() const { return cyclic_; }

 private:
  friend OrthogonalAction cyclic_generator(int l, const std::vector<int>& exponents);

  static bool same(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff() < kOrbitDedupTol; }

  static Matrix reorthonormalize(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().transpose();
  }

  // Breadth-first closure. Products are re-orthonormalized every 16 levels.
  static std::vector<Matrix> close_group(const std::vector<Matrix>& gens) {
    const auto dim = gens.front().rows();
    std::vector<Matrix> elems{Matrix::Identity(dim, dim)};
    std::vector<std::size_t> frontier{0};
    for (int depth = 1; !frontier.empty(); ++depth) {
      std::vector<std::size_t> next;
      for (std::size_t idx : frontier) {
        for (const auto& g : gens) {
          Matrix prod = g * elems[idx];
          if (depth % 16 == 0) prod = reorthonormalize(prod);
          const bool known = std::any_of(elems.begin(), elems.end(), [&](const Matrix& e) { return same(e, prod); });
          if (known) continue;
          if (static_cast<int>(elems.size()) >= kMaxGroupOrder) {
            throw DomainError("OrthogonalAction: group has more than " + std::to_string(kMaxGroupOrder) + " elements");
          }
          elems.push_back(std::move(prod));
          next.push_back(elems.size() - 1);
        }
      }
      frontier = std::move(next);
    }
    return elems;
  }

  std::vector<Matrix> generators_;
  std::vector<Matrix> elements_;
  std::optional<CyclicBlock> cyclic_;
};

namespace detail {

// gamma^k for the cyclic block form, built from exact residues j = a k mod l.
inline Matrix cyclic_power(const CyclicBlock& block, int k) {
  const int m = 1 + static_cast<int>(block.exponents.size());
  Matrix g = Matrix::Zero(2 * m, 2 * m);
  for (int s = 0; s < m; ++s) {
    const long a = s == 0 ? 1 : block.exponents[s - 1];
    const long j = ((a * k) % block.order + block.order) % block.order;
    const double angle = 2.0 * kPi * static_cast<double>(j) / block.order;
    const double c = std::cos(angle), sn = std::sin(angle);
    g(2 * s, 2 * s) = c;
    g(2 * s, 2 * s + 1) = -sn;
    g(2 * s + 1, 2 * s) = sn;
    g(2 * s + 1, 2 * s + 1) = c;
  }
  return g;
}

}  // namespace detail

/// The cyclic action of order l on R^{2m} = C^m with block exponents
/// (1, a_1, ..., a_{m-1}). Every exponent must be coprime to l, which makes
/// the action free on the unit sphere.
inline OrthogonalAction cyclic_generator(int l, const std::vector<int>& exponents) {
  if (l < 2) throw DomainError("cyclic_generator: order must be >= 2");
  for (int a : exponents) {
    if (std::gcd(a, l) != 1) {
      throw DomainError("cyclic_generator: exponent " + std::to_string(a) + " is not coprime to " + std::to_string(l));
    }
  }
  OrthogonalAction action;
  action.cyclic_ = CyclicBlock{l, exponents};
  action.generators_ = {detail::cyclic_power(*action.cyclic_, 1)};
  action.elements_.reserve(l);
  for (int k = 0; k < l; ++k) action.elements_.push_back(detail::cyclic_power(*action.cyclic_, k));
  return action;
}

/// x -> -x on R^dim.
inline OrthogonalAction antipodal_action(int dim) {
  if (dim < 1) throw DomainError("antipodal_action: dimension must be >= 1");
  return OrthogonalAction::from_generators({-Matrix::Identity(dim, dim)});
}

/// Rotation by 2 pi/k about the last coordinate axis of R^3.
inline OrthogonalAction axis_rotation_action(int k) {
  if (k < 1) throw DomainError("axis_rotation_action: order must be >= 1");
  const double angle = 2.0 * kPi / k;
  Matrix g = Matrix::Identity(3, 3);
  g(0, 0) = std::cos(angle);
  g(0, 1) = -std::sin(angle);
  g(1, 0) = std::sin(angle);
  g(1, 1) = std::cos(angle);
  return OrthogonalAction::from_generators({g});
}

namespace detail {

inline void check_unit(const OrthogonalAction& action, const Vector& v, const char* who) {
  if (v.size() != action.ambient_dim()) throw DomainError(std::string(who) + ": vector has the wrong dimension");
  if (std::abs(v.norm() - 1.0) > 1e-12) throw DomainError(std::string(who) + ": vector is not a unit vector");
}

}  // namespace detail

/// {g v : g in G}, duplicates merged at tolerance 1e-9.
inline std::vector<Vector> orbit(const OrthogonalAction& action, const Vector& v) {
  detail::check_unit(action, v, "orbit");
  std::vector<Vector> points;
  for (const auto& g : action.elements()) {
    Vector p = g * v;
    const bool known = std::any_of(points.begin(), points.end(), [&](const Vector& q) { return (q - p).norm() < kOrbitDedupTol; });
    if (!known) points.push_back(std::move(p));
  }
  return points;
}

/// sum_{k<l} gamma^k v for a cyclic block action. With coprime exponents each
/// complex coordinate sums the l-th roots of unity, so the result vanishes.
inline Vector orbit_sum(const OrthogonalAction& action, const Vector& v) {
  if (!action.cyclic()) throw DomainError("orbit_sum: action is not in cyclic block form");
  detail::check_unit(action, v, "orbit_sum");
  const int l = action.cyclic()->order;
  Vector sum = Vector::Zero(v.size());
  for (const auto& g : action.elements()) sum += g * v;
  if (sum.norm() > 1e-10 * l) {
    throw ConvergenceError("orbit_sum: norm " + detail::fmt(sum.norm()) + " exceeds 1e-10 * l");
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Open-hemisphere test.
//
// A finite set P lies in an open hemisphere iff 0 is not in conv(P). Wolfe's
// minimum-norm-point algorithm finds z = argmin{|x| : x in conv(P)}; when
// z != 0, w = z/|z| satisfies <w, p> >= |z| for every p, and when z = 0 the
// convex weights realizing it certify that no witness exists.

struct HemisphereResult {
  enum class Status { contained, not_contained, indeterminate };
  Status status = Status::indeterminate;
  Vector witness;               // unit vector, set when contained
  Vector nearest;               // minimum-norm point of the convex hull
  std::vector<double> weights;  // convex combination of the points giving `nearest`
  double margin = 0.0;          // min_p <witness, p>, or |nearest| otherwise
};

inline constexpr double kHemisphereMargin = 1e-9;
inline constexpr double kHullZeroTol = 1e-10;

namespace detail {

// Affine minimizer of |P_S mu| subject to sum(mu) = 1.
inline Vector affine_minimizer(const Matrix& cols) {
  const auto k = cols.cols();
  Matrix sys = Matrix::Zero(k + 1, k + 1);
  sys.topLeftCorner(k, k) = cols.transpose() * cols;
  sys.block(0, k, k, 1).setOnes();
  sys.block(k, 0, 1, k).setOnes();
  Vector rhs = Vector::Zero(k + 1);
  rhs(k) = 1.0;
  return sys.fullPivLu().solve(rhs).head(k);
}

inline void min_norm_point(const Matrix& pts, std::vector<int>& active, Vector& lam) {
  const auto count = pts.cols();
  const double scale = pts.colwise().squaredNorm().maxCoeff();
  const double tol_z = 1e-12 * scale;
  const double tol_pos = 1e-12;

  int start = 0;
  pts.colwise().squaredNorm().minCoeff(&start);
  active = {start};
  lam = Vector::Ones(1);
  Vector x = pts.col(start);

  auto gather = [&]() {
    Matrix cols(pts.rows(), static_cast<Eigen::Index>(active.size()));
    for (std::size_t i = 0; i < active.size(); ++i) cols.col(static_cast<Eigen::Index>(i)) = pts.col(active[i]);
    return cols;
  };

  for (int major = 0; major < 10 * static_cast<int>(count) + 100; ++major) {
    if (x.norm() < 1e-15) break;
    Eigen::Index j = 0;
    const double best = (pts.transpose() * x).minCoeff(&j);
    if (best >= x.squaredNorm() - tol_z) break;
    if (std::find(active.begin(), active.end(), static_cast<int>(j)) != active.end()) break;
    active.push_back(static_cast<int>(j));
    lam.conservativeResize(lam.size() + 1);
    lam(lam.size() - 1) = 0.0;

    for (int minor = 0; minor < static_cast<int>(pts.rows()) + 2 + static_cast<int>(active.size()); ++minor) {
      const Vector mu = affine_minimizer(gather());
      if ((mu.array() > tol_pos).all()) {
        lam = mu;
        break;
      }
      double theta = 1.0;
      Eigen::Index drop = -1;
      for (Eigen::Index i = 0; i < mu.size(); ++i) {
        if (mu(i) <= tol_pos) {
          const double denom = lam(i) - mu(i);
          const double step = denom > 0.0 ? lam(i) / denom : 0.0;
          if (step < theta) {
            theta = step;
            drop = i;
          }
        }
      }
      lam = theta * mu + (1.0 - theta) * lam;
      if (drop >= 0) lam(drop) = 0.0;
      std::vector<int> kept;
      std::vector<double> kept_lam;
      for (Eigen::Index i = 0; i < lam.size(); ++i) {
        if (lam(i) > tol_pos) {
          kept.push_back(active[static_cast<std::size_t>(i)]);
          kept_lam.push_back(lam(i));
        }
      }
      active = std::move(kept);
      lam = Eigen::Map<Vector>(kept_lam.data(), static_cast<Eigen::Index>(kept_lam.size()));
      lam /= lam.sum();
    }
    x = gather() * lam;
  }
}

}  // namespace detail

inline HemisphereResult hemisphere_test(const std::vector<Vector>& points) {
  if (points.empty()) throw DomainError("in_open_hemisphere: empty point list");
  const auto dim = points.front().size();
  Matrix pts(dim, static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != dim) throw DomainError("in_open_hemisphere: points have mixed dimensions");
    pts.col(static_cast<Eigen::Index>(i)) = points[i];
  }

  std::vector<int> active;
  Vector lam;
  detail::min_norm_point(pts, active, lam);

  HemisphereResult result;
  result.weights.assign(points.size(), 0.0);
  result.nearest = Vector::Zero(dim);
  for (std::size_t i = 0; i < active.size(); ++i) {
    result.weights[static_cast<std::size_t>(active[i])] = lam(static_cast<Eigen::Index>(i));
    result.nearest += lam(static_cast<Eigen::Index>(i)) * pts.col(active[i]);
  }

  const double z = result.nearest.norm();
  if (z > 0.0) {
    const Vector w = result.nearest / z;
    const double margin = (pts.transpose() * w).minCoeff();
    if (margin > kHemisphereMargin) {
      result.status = HemisphereResult::Status::contained;
      result.witness = w;
      result.margin = margin;
      return result;
    }
  }
  result.margin = z;
  result.status = z <= kHullZeroTol ? HemisphereResult::Status::not_contained : HemisphereResult::Status::indeterminate;
  return result;
}

/// A unit w with <w, p> > 0 for every point, or nullopt when the origin lies
/// in the convex hull. Throws ConvergenceError when neither can be certified
/// at the 1e-9 margin.
inline std::optional<Vector> in_open_hemisphere(const std::vector<Vector>& points) {
  auto result = hemisphere_test(points);
  switch (result.status) {
    case HemisphereResult::Status::contained:
      return std::move(result.witness);
    case HemisphereResult::Status::not_contained:
      return std::nullopt;
    case HemisphereResult::Status::indeterminate:
      break;
  }
  throw ConvergenceError("in_open_hemisphere: indeterminate at tolerance (hull distance " + detail::fmt(result.margin) + ")");
}

}  // namespace orbispec

#endif  // ORBISPEC_GROUPS_HPP
