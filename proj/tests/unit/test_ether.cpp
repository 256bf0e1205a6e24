#include <doctest.h>

#include "dyngeo/errors.hpp"
#include "dyngeo/ether.hpp"
#include "helpers.hpp"

using namespace dyngeo;

TEST_CASE("flat Ether Hamiltonian is linear with gradient 2 omega") {
  const auto m = make_model("flat-r2");
  const auto f = make_ether_field(m);
  const Vec x = vec({0.2, -0.1}), z = vec({1.0, 0.5});
  CHECK(f->strategy() == EtherStrategy::ClosedForm);
  CHECK((f->eval(x, z) - 2 * m->omega(z) * (z - x)).norm() < 1e-14);
  CHECK((f->grad_z(x, z) - 2 * m->omega(z)).norm() < 1e-14);
  CHECK((f->reflect(x, z) - (2 * x - z)).norm() < 1e-9);
}

TEST_CASE("line-integral and jet strategies agree near the diagonal") {
  for (const char* name : {"sphere-s2", "hyperbolic-h2"}) {
    const auto m = make_model(name);
    EtherParams jp;
    jp.strategy = EtherStrategy::Jet;
    const auto line = make_ether_field(m);
    const auto jet = make_ether_field(m, jp);
    CHECK(line->strategy() == EtherStrategy::LineIntegral);
    const Vec x = vec({0.1, 0.05});
    // The third-order jet leaves an O(r^4) remainder.
    for (double r : {0.02, 0.01}) {
      const Vec z = x + r * vec({0.6, 0.8});
      CHECK((line->eval(x, z) - jet->eval(x, z)).norm() < 20 * r * r * r * r);
    }
  }
}

TEST_CASE("axioms of the line-integral field") {
  for (const char* name : {"sphere-s2", "hyperbolic-h2"}) {
    const auto m = make_model(name);
    const auto f = make_ether_field(m);
    const Vec x = vec({0.12, -0.07}), z = vec({0.2, 0.05});
    const auto b = boundary_residuals(*f, x);
    CHECK(b.value < 1e-12);
    CHECK(b.gradient < 1e-8);
    CHECK(b.hessian < 1e-5);
    CHECK(skew_symmetry_residual(*f, x, z) < 1e-10);
    CHECK(zero_curvature_residual(*f, x, z, vec({1, 0}), vec({0.3, 1})) < 1e-6);
  }
}

TEST_CASE("integrated reflection reproduces the closed form") {
  const auto m = make_model("sphere-s2");
  const auto f = make_ether_field(m);
  const Vec x = vec({0.3, -0.2}), z = vec({0.1, 0.4});
  CHECK((f->reflect(x, z) - m->reflections()->apply(x, z)).norm() < 1e-8);
}

TEST_CASE("connection from reflections is Levi-Civita") {
  const auto m = make_model("hyperbolic-h2");
  const Vec x = vec({0.2, 0.3});
  CHECK((connection_from_reflections(*m->reflections(), x) - m->gamma(x)).max_abs() < 1e-6);
}

TEST_CASE("strategy names round-trip") {
  for (auto s : {EtherStrategy::ClosedForm, EtherStrategy::LineIntegral, EtherStrategy::Jet}) {
    CHECK(parse_strategy(to_string(s)) == s);
  }
  CHECK_THROWS(parse_strategy("magic"));
}

TEST_CASE("jet field refuses points beyond its radius") {
  const auto m = make_model("sphere-s2");
  const JetEther jet(m, 3, 0.2);
  CHECK_THROWS_AS(jet.eval(vec({0.0, 0.0}), vec({0.5, 0.0})), DomainError);
}
