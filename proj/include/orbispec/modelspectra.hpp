#ifndef ORBISPEC_MODELSPECTRA_HPP
#define ORBISPEC_MODELSPECTRA_HPP

// Exact truncated Laplace spectra of model manifolds and good orbifolds
// (flat tori, round spheres, and their quotients by finite linear actions),
// together with the ground-truth geometry of a fixed catalog of models.

#include <algorithm>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "orbispec/errors.hpp"
#include "orbispec/groups.hpp"
#include "orbispec/spaceform.hpp"

namespace orbispec {

struct SpectrumEntry {
  double value = 0.0;
  std::int64_t multiplicity = 0;

  bool operator==(const SpectrumEntry&) const = default;
};

/// A truncated Laplace spectrum: every eigenvalue <= truncation is listed with
/// its multiplicity, and nothing above it.
struct Spectrum {
  std::vector<SpectrumEntry> entries;
  double truncation = 0.0;
  std::optional<int> dimension;

  void validate() const {
    if (!(truncation >= 0.0) || !std::isfinite(truncation)) throw DomainError("Spectrum: truncation must be finite and >= 0");
    if (entries.empty() || entries.front().value != 0.0 || entries.front().multiplicity != 1) {
      throw DomainError("Spectrum: first entry must be (0, 1) for a connected closed space");
    }
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const auto& e = entries[i];
      if (!std::isfinite(e.value) || e.value < 0.0) throw DomainError("Spectrum: eigenvalues must be finite and >= 0");
      if (e.multiplicity <= 0) throw DomainError("Spectrum: multiplicities must be positive");
      if (e.value > truncation) throw DomainError("Spectrum: eigenvalue " + detail::fmt(e.value) + " above truncation");
      if (i > 0 && !(entries[i - 1].value < e.value)) throw DomainError("Spectrum: eigenvalues must be strictly increasing");
    }
    if (dimension && *dimension < 1) throw DomainError("Spectrum: dimension must be >= 1");
  }

  /// Eigenvalue count with multiplicity.
  std::int64_t total_count() const {
    std::int64_t n = 0;
    for (const auto& e : entries) n += e.multiplicity;
    return n;
  }

  bool operator==(const Spectrum&) const = default;
};

/// N(lambda): number of eigenvalues <= lambda, counted with multiplicity.
inline std::int64_t counting_function(const Spectrum& spec, double lambda) {
  if (lambda > spec.truncation) {
    throw DomainError("counting_function: lambda " + detail::fmt(lambda) + " beyond truncation " +
                      detail::fmt(spec.truncation));
  }
  std::int64_t n = 0;
  for (const auto& e : spec.entries) {
    if (e.value > lambda) break;
    n += e.multiplicity;
  }
  return n;
}

namespace detail {

// Levels keyed by an exact integer; eigenvalue = scale * key.
inline Spectrum levels_to_spectrum(const std::map<std::int64_t, std::int64_t>& levels, double scale, double truncation,
                                   int dimension) {
  Spectrum spec;
  spec.truncation = truncation;
  spec.dimension = dimension;
  for (const auto& [key, mult] : levels) {
    if (mult == 0) continue;
    spec.entries.push_back({scale * static_cast<double>(key), mult});
  }
  return spec;
}

// Smallest denominator q <= max_den with x q an integer up to tolerance.
inline std::optional<std::int64_t> rational_denominator(double x, std::int64_t max_den) {
  double frac = x;
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(frac);
    const auto ai = static_cast<std::int64_t>(a);
    const std::int64_t p2 = ai * p1 + p0, q2 = ai * q1 + q0;
    if (q2 > max_den) return std::nullopt;
    if (std::abs(x * static_cast<double>(q2) - static_cast<double>(p2)) <= 1e-9 * std::max(1.0, std::abs(x * q2))) return q2;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const double rem = frac - a;
    if (rem < 1e-15) return std::nullopt;
    frac = 1.0 / rem;
  }
  return std::nullopt;
}

// Integer coefficient vectors k with |B^{-T} k|^2 <= radius2, via the box
// |k_i| <= sqrt(radius2 * G_ii) with G = B^T B.
inline void for_each_dual_vector(const Matrix& basis, double radius2, double box_scale,
                                 const std::function<void(const Eigen::VectorXi&)>& visit) {
  const auto n = basis.cols();
  const Matrix gram = basis.transpose() * basis;
  Eigen::VectorXi bound(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    bound(i) = static_cast<int>(std::floor(box_scale * std::sqrt(std::max(0.0, radius2 * gram(i, i))) + 1e-9));
  }
  Eigen::VectorXi k = -bound;
  while (true) {
    visit(k);
    Eigen::Index i = 0;
    while (i < n && k(i) == bound(i)) {
      k(i) = -bound(i);
      ++i;
    }
    if (i == n) break;
    ++k(i);
  }
}

struct DualForm {
  Matrix dual_gram;          // (B^T B)^{-1}: |mu_k|^2 = k^T Q k
  Eigen::MatrixXd scaled;    // denominator * Q, integral when exact
  std::int64_t denominator = 0;  // 0 when Q is not rational
};

inline DualForm dual_form(const Matrix& basis) {
  if (basis.rows() != basis.cols() || basis.rows() < 1) throw DomainError("flat_torus_spectrum: basis must be square");
  Eigen::FullPivLU<Matrix> lu(basis);
  if (!lu.isInvertible() || std::abs(basis.determinant()) < 1e-12) throw DomainError("flat_torus_spectrum: singular lattice basis");
  DualForm form;
  form.dual_gram = (basis.transpose() * basis).inverse();
  std::int64_t den = 1;
  for (Eigen::Index i = 0; i < form.dual_gram.rows(); ++i) {
    for (Eigen::Index j = 0; j < form.dual_gram.cols(); ++j) {
      const auto q = rational_denominator(form.dual_gram(i, j), 1000000);
      if (!q) return form;
      den = std::lcm(den, *q);
      if (den > 1000000) return form;
    }
  }
  form.denominator = den;
  form.scaled = (form.dual_gram * static_cast<double>(den)).array().round().matrix();
  return form;
}

inline std::int64_t exact_norm(const DualForm& form, const Eigen::VectorXi& k) {
  std::int64_t s = 0;
  for (Eigen::Index i = 0; i < k.size(); ++i) {
    for (Eigen::Index j = 0; j < k.size(); ++j) {
      s += static_cast<std::int64_t>(form.scaled(i, j)) * k(i) * k(j);
    }
  }
  return s;
}

inline constexpr double kFourPiSq = 4.0 * kPi * kPi;

// Groups dual vectors of norm <= lambda_max into eigenvalue levels and hands
// each level's vectors to `per_level`, which returns its multiplicity.
inline Spectrum torus_levels(const Matrix& basis, double lambda_max, double box_scale,
                             const std::function<std::int64_t(const std::vector<Eigen::VectorXi>&)>& per_level) {
  if (!(lambda_max >= 0.0)) throw DomainError("flat_torus_spectrum: truncation must be >= 0");
  const DualForm form = dual_form(basis);
  const double radius2 = lambda_max / kFourPiSq;
  const int n = static_cast<int>(basis.cols());

  if (form.denominator > 0) {
    const double scale = kFourPiSq / static_cast<double>(form.denominator);
    std::map<std::int64_t, std::vector<Eigen::VectorXi>> levels;
    for_each_dual_vector(basis, radius2, box_scale, [&](const Eigen::VectorXi& k) {
      const std::int64_t key = exact_norm(form, k);
      if (scale * static_cast<double>(key) <= lambda_max) levels[key].push_back(k);
    });
    std::map<std::int64_t, std::int64_t> mult;
    for (const auto& [key, vecs] : levels) mult[key] = per_level(vecs);
    return levels_to_spectrum(mult, scale, lambda_max, n);
  }

  // Irrational dual Gram matrix: group by relative tolerance.
  std::vector<std::pair<double, Eigen::VectorXi>> all;
  for_each_dual_vector(basis, radius2, box_scale, [&](const Eigen::VectorXi& k) {
    const Vector kd = k.cast<double>();
    const double v = kFourPiSq * kd.dot(form.dual_gram * kd);
    if (v <= lambda_max) all.emplace_back(v, k);
  });
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  Spectrum spec;
  spec.truncation = lambda_max;
  spec.dimension = n;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    std::vector<Eigen::VectorXi> level;
    while (j < all.size() && all[j].first - all[i].first <= 1e-12 * std::max(1.0, all[i].first)) level.push_back(all[j++].second);
    const auto m = per_level(level);
    if (m > 0) spec.entries.push_back({i == 0 && all[i].first < 1e-300 ? 0.0 : all[i].first, m});
    i = j;
  }
  return spec;
}

}  // namespace detail

/// Spectrum of R^n / (B Z^n), B's columns being the lattice basis:
/// eigenvalues 4 pi^2 |mu|^2 over dual-lattice vectors mu.
inline Spectrum flat_torus_spectrum(const Matrix& basis, double lambda_max, double box_scale = 1.0) {
  return detail::torus_levels(basis, lambda_max, box_scale,
                              [](const std::vector<Eigen::VectorXi>& v) { return static_cast<std::int64_t>(v.size()); });
}

namespace detail {

// Binomial coefficient C(a, b) for small arguments, 0 when b < 0 or b > a.
inline std::int64_t binom(std::int64_t a, std::int64_t b) {
  if (b < 0 || a < 0 || b > a) return 0;
  b = std::min(b, a - b);
  std::int64_t r = 1;
  for (std::int64_t i = 1; i <= b; ++i) r = r * (a - b + i) / i;
  return r;
}

}  // namespace detail

/// Dimension of degree-l spherical harmonics on S^n.
inline std::int64_t harmonic_dimension(int n, int l) {
  return detail::binom(l + n, n) - detail::binom(l + n - 2, n);
}

/// Spectrum of the unit round S^n: l(l + n - 1) with harmonic multiplicities.
inline Spectrum sphere_spectrum(int n, double lambda_max) {
  if (n < 2) throw DomainError("sphere_spectrum: n must be >= 2");
  if (!(lambda_max >= 0.0)) throw DomainError("sphere_spectrum: truncation must be >= 0");
  std::map<std::int64_t, std::int64_t> levels;
  for (std::int64_t l = 0; static_cast<double>(l * (l + n - 1)) <= lambda_max; ++l) levels[l * (l + n - 1)] = harmonic_dimension(n, static_cast<int>(l));
  return detail::levels_to_spectrum(levels, 1.0, lambda_max, n);
}

/// Dimensions of the G-invariant degree-l harmonics on the unit sphere of the
/// action's ambient space, for l = 0..l_max.
///
/// Averages the character chi_l(g) = h_l(g) - h_{l-2}(g) over the group, where
/// h_d(g) is the trace of g on degree-d polynomials, i.e. the complete
/// homogeneous symmetric polynomial of degree d in g's eigenvalues.
inline std::vector<std::int64_t> invariant_multiplicities(const OrthogonalAction& action, int l_max) {
  if (l_max < 0) throw DomainError("invariant_multiplicity: degree must be >= 0");
  const auto dim = action.ambient_dim();
  std::vector<std::complex<double>> avg(l_max + 1, 0.0);
  for (const auto& g : action.elements()) {
    if ((g.transpose() * g - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff() > 1e-9) {
      throw DomainError("invariant_multiplicity: non-orthogonal group element");
    }
    const Eigen::VectorXcd eig = Eigen::EigenSolver<Matrix>(g, false).eigenvalues();
    std::vector<std::complex<double>> h(l_max + 1, 0.0);
    h[0] = 1.0;
    for (Eigen::Index j = 0; j < eig.size(); ++j) {
      for (int d = 1; d <= l_max; ++d) h[d] += eig(j) * h[d - 1];
    }
    for (int l = 0; l <= l_max; ++l) avg[l] += h[l] - (l >= 2 ? h[l - 2] : 0.0);
  }
  std::vector<std::int64_t> out(l_max + 1);
  for (int l = 0; l <= l_max; ++l) {
    const std::complex<double> m = avg[l] / static_cast<double>(action.order());
    const double rounded = std::round(m.real());
    if (std::abs(m.real() - rounded) > 1e-6 || std::abs(m.imag()) > 1e-6 || rounded < 0.0) {
      throw ConvergenceError("invariant_multiplicity: non-integral average " + detail::fmt(m.real()) + " at l = " +
                             std::to_string(l));
    }
    out[l] = static_cast<std::int64_t>(rounded);
  }
  return out;
}

inline std::int64_t invariant_multiplicity(const OrthogonalAction& action, int l) {
  return invariant_multiplicities(action, l).back();
}

// ---------------------------------------------------------------------------
// Models

enum class ModelKind { flat_torus, round_sphere, sphere_quotient, torus_quotient };

struct SingularPoint {
  int isotropy_order = 1;
  bool isolated = true;
};

struct GroundTruth {
  double volume = 0.0;
  double diameter = 0.0;
  double curvature_lower_bound = 0.0;
  std::vector<SingularPoint> singular_points;
  std::string derivation;
};

struct ModelOrbifold {
  std::string id;
  ModelKind kind = ModelKind::flat_torus;
  int dimension = 2;
  Matrix lattice;                         // torus kinds: columns span the lattice
  std::optional<OrthogonalAction> action;  // quotient kinds; linear on R^{n+1} or R^n
  GroundTruth truth;

  int max_isotropy_order() const {
    int m = 1;
    for (const auto& p : truth.singular_points) m = std::max(m, p.isotropy_order);
    return m;
  }
  int isolated_singular_count() const {
    return static_cast<int>(std::count_if(truth.singular_points.begin(), truth.singular_points.end(),
                                          [](const SingularPoint& p) { return p.isolated; }));
  }
};

namespace detail {

// Good-orbifold contract: every non-identity element fixes a set of
// codimension >= 2 and preserves orientation.
inline void check_quotient_action(const OrthogonalAction& action, int manifold_dim, int ambient_fixed_offset) {
  const auto dim = action.ambient_dim();
  for (const auto& g : action.elements()) {
    if ((g - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff() < 1e-9) continue;
    if (g.determinant() < 0.0) throw DomainError("ModelOrbifold: action must preserve orientation");
    const Eigen::VectorXcd eig = Eigen::EigenSolver<Matrix>(g, false).eigenvalues();
    int fixed = 0;
    for (Eigen::Index i = 0; i < eig.size(); ++i) fixed += std::abs(eig(i) - 1.0) < 1e-9 ? 1 : 0;
    const int fixed_dim = fixed - ambient_fixed_offset;
    if (manifold_dim - fixed_dim < 2) throw DomainError("ModelOrbifold: fixed-point set has codimension < 2");
  }
}

// Integer matrix of f -> f o A on dual coordinates: k -> B^T A^T B^{-T} k.
inline Eigen::MatrixXi dual_action(const Matrix& basis, const Matrix& a) {
  const Matrix p = basis.transpose() * a.transpose() * basis.transpose().inverse();
  const Matrix rounded = p.array().round().matrix();
  if ((p - rounded).cwiseAbs().maxCoeff() > 1e-9) throw DomainError("torus quotient: action does not preserve the lattice");
  return rounded.cast<int>();
}

}  // namespace detail

inline ModelOrbifold round_sphere_model(int n) {
  ModelOrbifold m;
  m.id = "s" + std::to_string(n);
  m.kind = ModelKind::round_sphere;
  m.dimension = n;
  m.truth.volume = sphere_measure(n);
  m.truth.diameter = kPi;
  m.truth.curvature_lower_bound = 1.0;
  m.truth.derivation = "unit round sphere; antipodal points realize the diameter pi";
  return m;
}

inline ModelOrbifold flat_torus_model(std::string id, const Matrix& basis) {
  ModelOrbifold m;
  m.id = std::move(id);
  m.kind = ModelKind::flat_torus;
  m.dimension = static_cast<int>(basis.cols());
  m.lattice = basis;
  m.truth.volume = std::abs(basis.determinant());
  m.truth.curvature_lower_bound = 0.0;
  return m;
}

/// S^n / G for a finite G < SO(n + 1) with fixed sets of codimension >= 2.
inline ModelOrbifold sphere_quotient_model(std::string id, int n, OrthogonalAction action, GroundTruth truth) {
  if (action.ambient_dim() != n + 1) throw DomainError("sphere_quotient_model: action must act on R^{n+1}");
  detail::check_quotient_action(action, n, 1);
  ModelOrbifold m;
  m.id = std::move(id);
  m.kind = ModelKind::sphere_quotient;
  m.dimension = n;
  truth.volume = sphere_measure(n) / action.order();
  m.action = std::move(action);
  m.truth = std::move(truth);
  return m;
}

/// (R^n / L) / G for a finite linear G preserving the lattice L.
inline ModelOrbifold torus_quotient_model(std::string id, const Matrix& basis, OrthogonalAction action, GroundTruth truth) {
  if (action.ambient_dim() != basis.cols()) throw DomainError("torus_quotient_model: action dimension mismatch");
  detail::check_quotient_action(action, static_cast<int>(basis.cols()), 0);
  for (const auto& g : action.generators()) detail::dual_action(basis, g);
  ModelOrbifold m;
  m.id = std::move(id);
  m.kind = ModelKind::torus_quotient;
  m.dimension = static_cast<int>(basis.cols());
  m.lattice = basis;
  truth.volume = std::abs(basis.determinant()) / action.order();
  m.action = std::move(action);
  m.truth = std::move(truth);
  return m;
}

/// Spectrum of a sphere or torus quotient: invariant eigenfunctions only.
inline Spectrum quotient_spectrum(const ModelOrbifold& model, double lambda_max) {
  if (!(lambda_max >= 0.0)) throw DomainError("quotient_spectrum: truncation must be >= 0");
  if (!model.action) throw DomainError("quotient_spectrum: model " + model.id + " has no group action");
  if (model.kind == ModelKind::sphere_quotient) {
    const int n = model.dimension;
    int l_max = 0;
    while (static_cast<double>(static_cast<std::int64_t>(l_max + 1) * (l_max + n)) <= lambda_max) ++l_max;
    const auto mult = invariant_multiplicities(*model.action, l_max);
    std::map<std::int64_t, std::int64_t> levels;
    for (int l = 0; l <= l_max; ++l) levels[static_cast<std::int64_t>(l) * (l + n - 1)] = mult[l];
    return detail::levels_to_spectrum(levels, 1.0, lambda_max, n);
  }
  if (model.kind == ModelKind::torus_quotient) {
    std::vector<Eigen::MatrixXi> group;
    for (const auto& g : model.action->elements()) group.push_back(detail::dual_action(model.lattice, g));
    // Invariant combinations of e^{2 pi i <mu, x>} in a level = orbits of the
    // dual action on that level's vectors.
    auto orbits = [&group](const std::vector<Eigen::VectorXi>& level) {
      std::set<std::vector<int>> reps;
      for (const auto& k : level) {
        std::vector<int> best;
        for (const auto& p : group) {
          const Eigen::VectorXi img = p * k;
          std::vector<int> v(img.data(), img.data() + img.size());
          if (best.empty() || v < best) best = std::move(v);
        }
        reps.insert(std::move(best));
      }
      return static_cast<std::int64_t>(reps.size());
    };
    return detail::torus_levels(model.lattice, lambda_max, 1.0, orbits);
  }
  throw DomainError("quotient_spectrum: unsupported model kind for " + model.id);
}

/// Exact spectrum of any catalog model.
inline Spectrum model_spectrum(const ModelOrbifold& model, double lambda_max) {
  switch (model.kind) {
    case ModelKind::round_sphere:
      return sphere_spectrum(model.dimension, lambda_max);
    case ModelKind::flat_torus:
      return flat_torus_spectrum(model.lattice, lambda_max);
    case ModelKind::sphere_quotient:
    case ModelKind::torus_quotient:
      return quotient_spectrum(model, lambda_max);
  }
  throw DomainError("model_spectrum: unknown model kind");
}

/// The verification catalog. Diameters are stored from geometry:
///  - S^n/G: two points on the rotation axis (or any antipodal pair) are at
///    distance pi in the quotient, the largest possible.
///  - Flat square quotients: the torus diameter sqrt(2)/2 bounds the
///    quotient's, and the images of (0,0) and (1/2,1/2) attain it.
///  - Lens space L(p; 1): Z_p acts by unit scalars on C^2, commuting with the
///    transitive U(2); from (1, 0) the farthest orbit is {(0, z)}, at pi/2.
inline std::vector<ModelOrbifold> model_catalog() {
  std::vector<ModelOrbifold> cat;
  cat.push_back(round_sphere_model(2));

  for (int k : {2, 3, 4, 6}) {
    GroundTruth t;
    t.diameter = kPi;
    t.curvature_lower_bound = 1.0;
    t.singular_points = {{k, true}, {k, true}};
    t.derivation = "rotation by 2pi/" + std::to_string(k) + " fixes the two poles; poles are pi apart";
    cat.push_back(sphere_quotient_model("s2-mod-" + std::to_string(k), 2, axis_rotation_action(k), t));
  }

  const Matrix square = Matrix::Identity(2, 2);
  auto torus = flat_torus_model("torus", square);
  torus.truth.diameter = std::sqrt(2.0) / 2.0;
  torus.truth.derivation = "unit square torus; (1/2, 1/2) is farthest from the origin";
  cat.push_back(torus);

  {
    GroundTruth t;
    t.diameter = std::sqrt(2.0) / 2.0;
    t.curvature_lower_bound = 0.0;
    t.singular_points = {{2, true}, {2, true}, {2, true}, {2, true}};
    t.derivation = "x -> -x fixes the four half-periods; corners (0,0) and (1/2,1/2) are sqrt(2)/2 apart";
    cat.push_back(torus_quotient_model("pillowcase", square, antipodal_action(2), t));
  }
  {
    Matrix quarter(2, 2);
    quarter << 0.0, -1.0, 1.0, 0.0;
    GroundTruth t;
    t.diameter = std::sqrt(2.0) / 2.0;
    t.curvature_lower_bound = 0.0;
    t.singular_points = {{4, true}, {4, true}, {2, true}};
    t.derivation = "quarter turn fixes (0,0) and (1/2,1/2); its square also fixes the pair {(1/2,0),(0,1/2)}";
    cat.push_back(torus_quotient_model("torus-mod-4", square, OrthogonalAction::from_generators({quarter}), t));
  }

  cat.push_back(round_sphere_model(3));
  {
    GroundTruth t;
    t.diameter = kPi / 2.0;
    t.curvature_lower_bound = 1.0;
    t.derivation = "L(5;1): free scalar Z_5 action on S^3; homogeneous, farthest orbit at pi/2";
    cat.push_back(sphere_quotient_model("lens-5-1", 3, cyclic_generator(5, {1}), t));
  }
  return cat;
}

inline const ModelOrbifold& find_model(const std::vector<ModelOrbifold>& catalog, const std::string& id) {
  for (const auto& m : catalog) {
    if (m.id == id) return m;
  }
  throw DomainError("unknown model id '" + id + "'");
}

}  // namespace orbispec

#endif  // ORBISPEC_MODELSPECTRA_HPP
