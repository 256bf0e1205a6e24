#include "dyngeo/field.hpp"

#include "dyngeo/finite_diff.hpp"

namespace dyngeo {

Mat InternalVectorField::field_jacobian(const Vec& x, const Vec& z, const Vec& w) const {
  return fd::jacobian([&](const Vec& p) -> Vec { return field(x, p) * w; }, z, 1e-5, true);
}

Mat PointFamily::d_dx(const Vec& x, const Vec& z) const {
  const int d = static_cast<int>(x.size());
  return jacobian(apply(seed(x, 0, d), constant(z, d)), 0, d);
}

Mat PointFamily::d_dz(const Vec& x, const Vec& z) const {
  const int d = static_cast<int>(z.size());
  return jacobian(apply(constant(x, d), seed(z, 0, d)), 0, d);
}

}  // namespace dyngeo
