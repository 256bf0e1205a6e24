#include <doctest.h>

#include "dyngeo/phase.hpp"
#include "helpers.hpp"

using namespace dyngeo;

TEST_CASE("flat generating phase has gradient omega times the displacement") {
  const auto m = make_model("flat-r2");
  const auto f = make_ether_field(m);
  const Vec a = vec({0.0, 0.0}), b = vec({0.3, 0.1}), x = vec({0.1, -0.2});
  const auto sigma = path_symplectomorphism(f, Path::bulge(a, b, vec({0.05, 0.05})));
  const auto g = generating_phase(f, sigma, x);
  // Fixed point of z -> 2x - (z + d) is x - d / 2.
  CHECK((g.x_tilde - (x - 0.5 * (b - a))).norm() < 1e-8);
  CHECK((g.dphi - m->omega(x) * (b - a)).norm() < 1e-5);
  CHECK(g.dphi_residual < 1e-5);
}

TEST_CASE("curved generating phase") {
  for (const char* name : {"sphere-s2", "hyperbolic-h2"}) {
    const auto f = make_ether_field(make_model(name));
    const auto sigma = path_symplectomorphism(f, Path::bulge(vec({0.0, 0.05}), vec({0.12, 0.0}), vec({0.02, 0.02})));
    const Vec x = vec({0.05, -0.05});
    const auto g = generating_phase(f, sigma, x);
    CHECK(g.dphi_residual < 1e-4);
    CHECK(g.mesh_change < 1e-5);
    CHECK(hamilton_jacobi_residual(f, sigma, x, g.level).norm() < 1e-4);
    PhaseOptions bent;
    bent.aux = AuxiliaryPath::Bulge;
    // Phi changes by a constant with the auxiliary path, so its gradient does not.
    const auto g2 = generating_phase(f, sigma, x, bent);
    CHECK((g.dphi - g2.dphi).norm() < 1e-5);
  }
}
