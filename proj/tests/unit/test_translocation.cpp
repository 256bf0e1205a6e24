#include <numbers>

#include <doctest.h>

#include "dyngeo/translocation.hpp"
#include "helpers.hpp"

using namespace dyngeo;

TEST_CASE("flat oscillator flow turns clockwise") {
  const HamiltonianSystem sys(make_model("flat-r2"), make_hamiltonian("flat-oscillator"));
  const Vec x = sys.flow(std::numbers::pi / 2, vec({1.0, 0.0}));
  CHECK((x - vec({0.0, -1.0})).norm() < 1e-9);
}

TEST_CASE("flat oscillator translocation is the oscillator at the anchor") {
  const auto m = make_model("flat-r2");
  const HamiltonianSystem sys(m, make_hamiltonian("flat-oscillator"));
  const Vec y = vec({0.4, -0.3});
  const TranslocatedSystem tr(make_ether_field(m), sys, y);
  for (double t : {0.3, 1.0}) {
    for (const Vec& z : {vec({0.0, 0.0}), vec({1.0, 0.5}), vec({-0.2, 0.9})}) {
      CHECK(tr.value(t, z) == doctest::Approx(0.5 * (z - y).squaredNorm()).epsilon(1e-9));
    }
    CHECK(std::abs(tr.value(t, y)) < 1e-9);
    CHECK(tr.gradient(t, y).norm() < 1e-10);
  }
}

TEST_CASE("translocation factorises the flow") {
  for (const auto& [model, ham, t] : {std::tuple{"sphere-s2", "sphere-height", 0.5},
                                      std::tuple{"hyperbolic-h2", "hyperbolic-quadratic", 0.4},
                                      std::tuple{"flat-r2", "flat-quartic", 0.7}}) {
    const auto m = make_model(model);
    const HamiltonianSystem sys(m, make_hamiltonian(ham));
    const TranslocatedSystem tr(make_ether_field(m), sys, vec({0.1, 0.05}));
    CHECK(factorization_residual(tr, t, vec({0.15, -0.05})) < 1e-6);
    CHECK(std::abs(tr.value(t, tr.anchor())) < 1e-7);
    CHECK(tr.gradient(t, tr.anchor()).norm() < 1e-7);
    CHECK(hessian_check(tr, t).residual < 1e-4);
    CHECK(first_variation(tr, t).residual < 1e-5);
  }
}

TEST_CASE("covariantly quadratic systems have the closed-form monodromy") {
  const auto m = make_model("flat-r2");
  const HamiltonianSystem osc(m, make_hamiltonian("flat-oscillator"));
  const Vec y = vec({0.2, 0.1});
  CHECK(covariant_quadratic_residual(osc, y, 1.0) < 1e-9);
  const TranslocatedSystem tr(make_ether_field(m), osc, y);
  CHECK(closed_form_monodromy_residual(tr, 1.0, first_variation(tr, 1.0)) < 1e-6);
  HamiltonianParams p;
  p.coefficient = 1.0;
  const HamiltonianSystem cubic(m, make_hamiltonian("flat-cubic", p));
  CHECK(covariant_quadratic_residual(cubic, vec({0.3, 0.2}), 1.0) > 0.1);
}
