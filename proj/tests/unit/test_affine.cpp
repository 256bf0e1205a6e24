#include <doctest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "dyngeo/affine.hpp"
#include "helpers.hpp"

using namespace dyngeo;

TEST_CASE("default inversion matrix has order four") {
  const Mat m = default_inversion_matrix(4);
  const Mat id = Mat::Identity(4, 4);
  CHECK((m * m + id).norm() < 1e-15);
  CHECK((m * m * m * m - id).norm() < 1e-15);
  const LinearInversions s(default_inversion_matrix(2));
  CHECK_FALSE(s.involutive());
  const Vec x = vec({0.1, 0.2}), z = vec({0.7, -0.3});
  CHECK((s.apply(x, s.apply(x, z)) - z).norm() > 0.1);
  CHECK((s.inverse(x, s.apply(x, z)) - z).norm() < 1e-15);
}

TEST_CASE("linear family: Cartan fields of s and its inverse") {
  const Mat m = default_inversion_matrix(2);
  const Mat id = Mat::Identity(2, 2);
  const LinearInversions plus(m), minus(m.inverse());
  const Vec x = vec({0.3, 0.4});
  const Mat ap = cartan_field(plus, x), am = cartan_field(minus, x);
  CHECK((ap - (id - m)).norm() < 1e-12);
  CHECK((am - ap * (ap - id).inverse()).norm() < 1e-8);
  // Eigenvalues 1 -+ i.
  CHECK(cartan_spectrum_margin(ap) == doctest::Approx(1.0));
  CHECK(involution_skew_residual(ConstantField(id - m), plus, x, vec({1.0, 0.0})) == doctest::Approx(2.0));
}

TEST_CASE("inversions integrated from their own field") {
  const Mat m = default_inversion_matrix(2);
  const auto s = std::make_shared<LinearInversions>(m);
  const auto field = std::make_shared<InversionField>(s);
  const Vec x = vec({0.1, -0.1}), z = vec({0.5, 0.4});
  CHECK((inversions_from_field(*field, x, z) - s->apply(x, z)).norm() < 1e-8);

  const auto model = make_model("sphere-s2");
  const auto refl = std::make_shared<FamilyInversions>(model->reflections(), true);
  const auto a = std::make_shared<InversionField>(refl, model);
  const FieldInversions back(a);
  const Vec xs = vec({0.2, 0.1}), zs = vec({0.3, -0.1});
  CHECK((back.apply(xs, zs) - refl->apply(xs, zs)).norm() < 1e-6);
}

TEST_CASE("reflection fields: zero curvature, structure equation, connection") {
  for (const char* name : {"sphere-s2", "hyperbolic-h2"}) {
    const auto model = make_model(name);
    const auto refl = std::make_shared<FamilyInversions>(model->reflections(), true);
    const InversionField a(refl, model);
    const Vec x = vec({0.1, 0.05}), z = vec({0.15, -0.02});
    CHECK(field_zero_curvature_residual(a, x, z, vec({1, 0}), vec({0.2, 1})) < 1e-6);
    CHECK(involution_skew_residual(a, *refl, x, z) < 1e-10);
    const auto lc = [&](const Vec& p) { return model->gamma(p); };
    CHECK(structural_equation_residual(a, lc, x, vec({1, 0}), vec({0.2, 1})) < 1e-5);
    CHECK((inversion_connection(*refl, x) - model->gamma(x)).max_abs() < 1e-5);
    CHECK((cartan_field(*refl, x) - 2 * Mat::Identity(2, 2)).norm() < 1e-10);
  }
}

TEST_CASE("symplectic inversive identities on the sphere") {
  const auto model = make_model("sphere-s2");
  const auto refl = std::make_shared<FamilyInversions>(model->reflections(), true);
  const auto r = symplectic_inversive_checks(*model, refl, refl, vec({0.1, 0.0}), vec({0.2, 0.1}));
  CHECK(r.omega_parallel < 1e-6);
  CHECK(r.cyclic_torsion < 1e-6);
  CHECK(r.diagonal_value < 1e-12);
  CHECK(r.hamiltonian_field < 1e-6);
  CHECK(r.inversion_relation < 1e-6);
  CHECK(r.second_derivative < 1e-5);
}

TEST_CASE("affine translocation of a linear field on the plane") {
  const auto model = make_model("flat-r2");
  const auto refl = std::make_shared<FamilyInversions>(model->reflections(), true);
  const auto a = std::make_shared<InversionField>(refl, model);
  Mat l(2, 2);
  l << 0.1, 1.0, -1.0, 0.2;
  const AffineTranslocation tr(model, a, make_vector_field("linear", l), vec({0.3, -0.2}));
  const auto r = affine_translocation_checks(tr, 1.0, vec({0.5, 0.1}));
  CHECK(r.factorization < 1e-6);
  CHECK(r.equilibrium < 1e-8);
  CHECK(r.linearisation < 1e-6);
  CHECK(r.consistency < 1e-10);
  CHECK(r.closed_form < 1e-8);
  // X^t of a linear field is exp(t L).
  const Vec y = tr.anchor();
  CHECK((tr.flow(1.0, y) - Mat(l.exp()) * y).norm() < 1e-8);
}
