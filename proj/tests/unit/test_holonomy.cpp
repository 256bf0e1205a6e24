#include <numbers>

#include <doctest.h>

#include "dyngeo/holonomy.hpp"
#include "helpers.hpp"

using namespace dyngeo;

namespace {

// Area enclosed by the chart circle |x| = rho for curvature +1 / -1.
double sphere_area(double rho) { return 4 * std::numbers::pi * rho * rho / (1 + rho * rho); }
double disk_area(double rho) { return 4 * std::numbers::pi * rho * rho / (1 - rho * rho); }

}  // namespace

TEST_CASE("kinematic holonomy angle is curvature times enclosed area") {
  const auto sphere = make_ether_field(make_model("sphere-s2"));
  const auto disk = make_ether_field(make_model("hyperbolic-h2"));
  for (double rho : {0.1, 0.2}) {
    const auto loop = circle_loop(vec({rho, 0.0}), Vec::Zero(2));
    CHECK(rotation_angle(kinematic_holonomy(sphere, loop).matrix) == doctest::Approx(sphere_area(rho)).epsilon(1e-8));
    CHECK(rotation_angle(kinematic_holonomy(disk, loop).matrix) == doctest::Approx(-disk_area(rho)).epsilon(1e-8));
  }
}

TEST_CASE("flat holonomy is trivial") {
  const auto f = make_ether_field(make_model("flat-r2"));
  const auto loop = circle_loop(vec({0.5, 0.0}), Vec::Zero(2));
  const Vec z = vec({0.3, -1.0});
  CHECK((dynamic_holonomy(f, loop).evaluate(z) - z).norm() < 1e-9);
  CHECK((kinematic_holonomy(f, loop).matrix - Mat::Identity(2, 2)).norm() < 1e-9);
}

TEST_CASE("loop areas of a coordinate square") {
  const auto sq = coordinate_square(vec({0.1, 0.2}), 0, 1, 0.01);
  const Mat a = loop_areas(sq.path);
  CHECK(std::abs(a(0, 1)) == doctest::Approx(0.01).epsilon(1e-10));
  CHECK(a(0, 1) == doctest::Approx(-a(1, 0)));
}

TEST_CASE("Ether curvature at the base point") {
  for (const char* name : {"sphere-s2", "hyperbolic-h2"}) {
    const auto f = make_ether_field(make_model(name));
    const auto d = diagonal_identities(*f, Vec::Zero(2));
    CHECK(d.value < 1e-8);
    CHECK(d.gradient < 1e-5);
    CHECK(d.sp_membership < 1e-8);
  }
}

TEST_CASE("small-loop defect shrinks at least like area^1.5") {
  const auto f = make_ether_field(make_model("sphere-s2"));
  const auto rep = small_loop_expansion(f, Vec::Zero(2), 0, 1, {0.04, 0.02, 0.01, 0.005}, vec({0.05, 0.02}));
  CHECK(rep.slope >= 1.5);
  CHECK(rep.deltas.back() < rep.deltas.front());
}

TEST_CASE("holonomy is conjugated by paths") {
  const auto f = make_ether_field(make_model("sphere-s2"));
  const auto loop = circle_loop(vec({0.1, 0.0}), Vec::Zero(2));
  const Path sigma = Path::line(vec({0.1, 0.0}), vec({0.2, 0.2}));
  CHECK(holonomy_conjugacy_residual(f, loop, sigma, vec({0.05, -0.05})) < 1e-7);
}
