#include <complex>

#include <doctest.h>

#include "dyngeo/errors.hpp"
#include "dyngeo/manifold.hpp"
#include "helpers.hpp"

using namespace dyngeo;

TEST_CASE("chart forms at the origin and off it") {
  const auto s = make_model("sphere-s2");
  const auto h = make_model("hyperbolic-h2");
  const Vec x = vec({0.3, -0.2});
  CHECK(s->omega(Vec::Zero(2))(0, 1) == doctest::Approx(4.0));
  CHECK(h->omega(Vec::Zero(2))(0, 1) == doctest::Approx(4.0));
  // 4 / (1 +- |x|^2)^2
  CHECK(s->omega(x)(0, 1) == doctest::Approx(3.1325867334951845).epsilon(1e-14));
  CHECK(h->omega(x)(0, 1) == doctest::Approx(5.2847139648566523).epsilon(1e-14));
  CHECK(s->omega(x)(1, 0) == doctest::Approx(-s->omega(x)(0, 1)));
}

TEST_CASE("flat reflections are point reflections") {
  const auto m = make_model("flat-r4");
  const Vec x = vec({0.1, 0.2, -0.3, 0.4}), z = vec({1.0, -1.0, 0.5, 2.0});
  CHECK((m->reflections()->apply(x, z) - (2 * x - z)).norm() < 1e-15);
  CHECK(m->flat());
  CHECK(m->dim() == 4);
}

TEST_CASE("sphere reflection matches the half-turn of the embedding") {
  const auto model = std::make_shared<SphereModel>();
  const Vec x = vec({0.3, -0.2}), z = vec({0.1, 0.4});
  const Eigen::Vector3d n = model->embed(x).normalized(), q = model->embed(z);
  const Vec oracle = model->chart(2 * n.dot(q) * n - q);
  CHECK((model->reflections()->apply(x, z) - oracle).norm() < 1e-14);
  CHECK(oracle[0] == doctest::Approx(0.27643378519290929).epsilon(1e-14));
  CHECK(oracle[1] == doctest::Approx(-1.0719499478623566).epsilon(1e-14));
}

TEST_CASE("disk reflection matches the Moebius conjugate of z -> -z") {
  const auto model = make_model("hyperbolic-h2");
  using C = std::complex<double>;
  const C a(0.3, -0.2), w(0.1, 0.4);
  auto to = [&](C v) { return (v + a) / (1.0 + std::conj(a) * v); };
  auto from = [&](C v) { return (v - a) / (1.0 - std::conj(a) * v); };
  const C o = to(-from(w));
  const Vec s = model->reflections()->apply(vec({0.3, -0.2}), vec({0.1, 0.4}));
  CHECK(s[0] == doctest::Approx(o.real()).epsilon(1e-14));
  CHECK(s[1] == doctest::Approx(o.imag()).epsilon(1e-14));
  CHECK(o.real() == doctest::Approx(0.52634324137497634).epsilon(1e-13));
}

TEST_CASE("closed-form curvature agrees with the Christoffel symbols") {
  for (const char* name : {"sphere-s2", "hyperbolic-h2"}) {
    const auto m = make_model(name);
    const Vec x = vec({0.2, 0.1});
    const Tensor4 closed = *m->curvature_closed_form(x);
    const Tensor4 numeric = curvature_tensor(*m, x);
    CHECK((closed - numeric).max_abs() < 1e-7);
  }
}

TEST_CASE("domains and unknown models") {
  const auto s = make_model("sphere-s2");
  CHECK(s->in_domain(vec({1.5, 0.0})));
  CHECK_FALSE(s->in_domain(vec({2.5, 0.0})));
  const auto h = make_model("hyperbolic-h2");
  CHECK_FALSE(h->in_domain(vec({0.95, 0.0})));
  CHECK_THROWS_AS(h->require_domain(vec({0.95, 0.0}), "test"), DomainError);
  CHECK_THROWS(make_model("torus"));
}
