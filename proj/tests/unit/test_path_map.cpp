#include <random>

#include <doctest.h>

#include "dyngeo/errors.hpp"
#include "dyngeo/path_map.hpp"
#include "helpers.hpp"

using namespace dyngeo;

TEST_CASE("flat path maps are translations") {
  const auto m = make_model("flat-r2");
  const auto f = make_ether_field(m);
  const Vec x = vec({0.1, 0.2}), y = vec({-0.4, 0.7}), z = vec({1.0, 1.0});
  const Path bent = Path::bulge(x, y, vec({0.3, 0.3}));
  CHECK((ether_translation(f, bent).evaluate(z) - (z + 2 * (y - x))).norm() < 1e-9);
  CHECK((path_symplectomorphism(f, bent).evaluate(z) - (z + (y - x))).norm() < 1e-9);
  CHECK((ether_exponential(*f, x, vec({0.5, -0.2}), 1.0) - (x + vec({0.5, -0.2}))).norm() < 1e-9);
}

TEST_CASE("Ether translation is a product of two reflections") {
  const auto m = make_model("sphere-s2");
  const auto f = make_ether_field(m);
  const Vec x = vec({0.1, 0.0}), y = vec({0.2, 0.15}), z = vec({0.05, -0.1});
  const auto s = m->reflections();
  const Vec oracle = s->apply(y, s->apply(x, z));
  CHECK((ether_translation(f, Path::line(x, y)).evaluate(z) - oracle).norm() < 1e-8);
  CHECK((ether_translation(f, Path::bulge(x, y, vec({0.05, -0.05}))).evaluate(z) - oracle).norm() < 1e-8);
}

TEST_CASE("symplectic paths: endpoints, inverse, composition, commutation") {
  const auto m = make_model("hyperbolic-h2");
  const auto f = make_ether_field(m);
  const Vec a = vec({0.0, 0.1}), b = vec({0.15, 0.0}), c = vec({0.1, -0.15});
  const auto m1 = path_symplectomorphism(f, Path::bulge(a, b, vec({0.02, 0.03})));
  const auto m2 = path_symplectomorphism(f, Path::line(b, c));
  CHECK((m1.evaluate(a) - b).norm() < 1e-9);
  const Vec z = vec({0.05, 0.05});
  CHECK((m1.inverse(m1.evaluate(z)) - z).norm() < 1e-9);
  const auto both = groupoid_compose(m2, m1);
  CHECK((both.evaluate(z) - m2.evaluate(m1.evaluate(z))).norm() < 1e-8);
  CHECK(reflection_commutation_residual(*f, m1, z) < 1e-7);
  CHECK_THROWS_AS(groupoid_compose(m1, m1), InvalidArgument);
}

TEST_CASE("differential is symplectic and agrees with differences") {
  const auto m = make_model("sphere-s2");
  const auto f = make_ether_field(m);
  const auto map = path_symplectomorphism(f, Path::line(vec({0.0, 0.0}), vec({0.3, 0.1})));
  const Vec z = vec({0.1, -0.2});
  const auto d = map.differential(z);
  CHECK(symplectic_defect(d.matrix, m->omega(d.source), m->omega(d.target)) < 1e-8);
  const double h = 1e-5;
  for (int i = 0; i < 2; ++i) {
    Vec e = Vec::Zero(2);
    e[i] = h;
    const Vec col = (map.evaluate(z + e) - map.evaluate(z - e)) / (2 * h);
    CHECK((col - d.matrix.col(i)).norm() < 1e-6);
  }
}

TEST_CASE("batch evaluation matches the serial reference bit for bit") {
  const auto m = make_model("sphere-s2");
  const auto f = make_ether_field(m);
  const auto map = path_symplectomorphism(f, Path::line(vec({0.0, 0.1}), vec({0.2, -0.1})));
  std::mt19937_64 rng(3);
  std::vector<Vec> zs;
  for (int i = 0; i < 64; ++i) zs.push_back(m->sample(rng, 0.2));
  const auto p = map.evaluate_batch(zs), s = map.evaluate_batch_serial(zs);
  REQUIRE(p.size() == s.size());
  for (std::size_t i = 0; i < p.size(); ++i) CHECK((p[i] - s[i]).norm() == 0.0);
}
