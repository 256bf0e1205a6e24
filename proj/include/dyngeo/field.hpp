#pragma once

#include <memory>

#include "dyngeo/types.hpp"

namespace dyngeo {

// A one-form in x with values in vector fields on z: the linear maps
// A_x(z): T_x -> T_z. Column j of field(x, z) is A_x(z)_j. Ether fields are
// the Hamiltonian special case.
class InternalVectorField {
 public:
  virtual ~InternalVectorField() = default;

  virtual int dim() const = 0;
  virtual Mat field(const Vec& x, const Vec& z) const = 0;
  // Throws DomainError when z is outside the field's domain.
  virtual void require_domain(const Vec&, const char*) const {}

  // D_z [A_x(z) w], a d x d matrix. The default uses central differences
  // with one Richardson level.
  virtual Mat field_jacobian(const Vec& x, const Vec& z, const Vec& w) const;

  // Cartan field a(x) = A_x(x).
  Mat cartan(const Vec& x) const { return field(x, x); }
};

using FieldPtr = std::shared_ptr<const InternalVectorField>;

// A family of point maps z -> s_x(z), evaluable in doubles and in
// forward-mode AD so that x- and z-derivatives are exact.
class PointFamily {
 public:
  virtual ~PointFamily() = default;

  virtual int dim() const = 0;
  virtual Vec apply(const Vec& x, const Vec& z) const = 0;
  virtual ADVec apply(const ADVec& x, const ADVec& z) const = 0;

  // d s_x(z) / dx and d s_x(z) / dz.
  Mat d_dx(const Vec& x, const Vec& z) const;
  Mat d_dz(const Vec& x, const Vec& z) const;
};

using FamilyPtr = std::shared_ptr<const PointFamily>;

}  // namespace dyngeo
