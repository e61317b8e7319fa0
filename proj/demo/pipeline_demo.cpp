// Hears the shape of a few catalog orbifolds: feeds each exact spectrum
// through the bound pipelines and prints the caps next to the truth.

#include <cstdio>

#include "orbispec/orbispec.hpp"

using namespace orbispec;

int main() {
  const auto catalog = model_catalog();
  std::printf("%-12s %6s %8s %8s %10s %10s\n", "model", "N", "vol", "D", "isotropy", "singular");
  for (const char* id : {"s2-mod-3", "pillowcase", "torus", "lens-5-1"}) {
    const auto& m = find_model(catalog, id);
    const double lambda_max = m.dimension == 3 ? 40.0 * 42.0 : (m.kind == ModelKind::sphere_quotient ? 100.0 * 101.0 : 1600.0 * kPi * kPi);
    const auto spec = model_spectrum(m, lambda_max);
    const auto rep = main_theorem_2(spec, m.truth.curvature_lower_bound);
    std::printf("%-12s %6lld %8.4f %8.4f %4d <= %-4lld %4d <= %lld\n", id, static_cast<long long>(spec.total_count()),
                rep.weyl->volume, rep.diameter, m.max_isotropy_order(), static_cast<long long>(rep.isotropy_cap),
                m.isolated_singular_count(), static_cast<long long>(*rep.singular_cap));
  }

  // lambda of the unit disk is j_{0,1}^2
  std::printf("lambda^2_0(1) = %.10f\n", lowest_dirichlet_eigenvalue(SpaceForm(2, 0.0), 1.0));
  return 0;
}
