#pragma once

#include <memory>
#include <string>

#include "dyngeo/field.hpp"
#include "dyngeo/finite_diff.hpp"
#include "dyngeo/manifold.hpp"
#include "dyngeo/ode.hpp"
#include "dyngeo/path_map.hpp"

namespace dyngeo {

// A family of diffeomorphisms z -> s_x(z) with isolated fixed points s_x(x) = x.
class InversiveStructure {
 public:
  virtual ~InversiveStructure() = default;
  virtual int dim() const = 0;
  virtual Vec apply(const Vec& x, const Vec& z) const = 0;
  // s_x^{-1}(z); the default solves s_x(w) = z by Newton from w = z.
  virtual Vec inverse(const Vec& x, const Vec& z) const;
  // Derivatives; the defaults are central differences.
  virtual Mat d_dx(const Vec& x, const Vec& z) const;
  virtual Mat d_dz(const Vec& x, const Vec& z) const;
  virtual bool involutive() const { return false; }
};

using InversivePtr = std::shared_ptr<const InversiveStructure>;

// Wraps a closed-form point family with exact (AD) derivatives.
class FamilyInversions final : public InversiveStructure {
 public:
  FamilyInversions(FamilyPtr family, bool involutive);
  int dim() const override { return family_->dim(); }
  Vec apply(const Vec& x, const Vec& z) const override { return family_->apply(x, z); }
  Vec inverse(const Vec& x, const Vec& z) const override;
  Mat d_dx(const Vec& x, const Vec& z) const override { return family_->d_dx(x, z); }
  Mat d_dz(const Vec& x, const Vec& z) const override { return family_->d_dz(x, z); }
  bool involutive() const override { return involutive_; }

 private:
  FamilyPtr family_;
  bool involutive_;
};

// s_x(z) = x + M (z - x) with constant M (no eigenvalue 0 or 1).
class LinearInversions final : public InversiveStructure {
 public:
  explicit LinearInversions(Mat m);
  int dim() const override { return static_cast<int>(m_.rows()); }
  Vec apply(const Vec& x, const Vec& z) const override { return x + m_ * (z - x); }
  Vec inverse(const Vec& x, const Vec& z) const override { return x + m_inv_ * (z - x); }
  Mat d_dx(const Vec&, const Vec&) const override { return Mat::Identity(dim(), dim()) - m_; }
  Mat d_dz(const Vec&, const Vec&) const override { return m_; }
  bool involutive() const override;
  const Mat& matrix() const { return m_; }

 private:
  Mat m_;
  Mat m_inv_;
};

// Rotation by pi/2 in each (q, p) pair: the default non-involutive family.
Mat default_inversion_matrix(int dim);

// s_x(z) by integrating ds/dtau = A_{p(tau)}(s) (x - z) along the chart
// segment from z to x.
Vec inversions_from_field(const InternalVectorField& field, const Vec& x, const Vec& z,
                          const ode::Options& opts = {});

// Inversions realised by integrating a field.
class FieldInversions final : public InversiveStructure {
 public:
  explicit FieldInversions(FieldPtr field, ode::Options opts = {});
  int dim() const override { return field_->dim(); }
  Vec apply(const Vec& x, const Vec& z) const override;

 private:
  FieldPtr field_;
  ode::Options opts_;
};

// A_x(z) = (d_x s_x)(s_x^{-1}(z)).
class InversionField final : public InternalVectorField {
 public:
  InversionField(InversivePtr s, ModelPtr model = nullptr);
  int dim() const override { return s_->dim(); }
  Mat field(const Vec& x, const Vec& z) const override;
  void require_domain(const Vec& z, const char* what) const override;
  const InversivePtr& inversions() const { return s_; }

 private:
  InversivePtr s_;
  ModelPtr model_;
};

// Constant field A = I - M of the linear family.
class ConstantField final : public InternalVectorField {
 public:
  explicit ConstantField(Mat a) : a_(std::move(a)) {}
  int dim() const override { return static_cast<int>(a_.rows()); }
  Mat field(const Vec&, const Vec&) const override { return a_; }
  Mat field_jacobian(const Vec&, const Vec&, const Vec&) const override {
    return Mat::Zero(dim(), dim());
  }

 private:
  Mat a_;
};

// A^-_x(z) = -[d_z s^+_x(z)]^{-1} A^+_x(s^+_x(z)).
class ConjugateField final : public InternalVectorField {
 public:
  ConjugateField(FieldPtr plus, InversivePtr s_plus);
  int dim() const override { return plus_->dim(); }
  Mat field(const Vec& x, const Vec& z) const override;
  void require_domain(const Vec& z, const char* what) const override {
    plus_->require_domain(z, what);
  }

 private:
  FieldPtr plus_;
  InversivePtr s_plus_;
};

// Connection and Cartan field of an inversive structure:
// Gamma^l_{jk} = -d^2 s^l / dz^m dx^r [d_z s]^{-1 m}_k [d_x s]^{-1 r}_j at z = x,
// a = d_x s at z = x.
Christoffel inversion_connection(const InversiveStructure& s, const Vec& x, double h = 1e-4);
Mat cartan_field(const InversiveStructure& s, const Vec& x);

// min over eigenvalues lambda of a(x) of min(|lambda|, |lambda - 1|).
double cartan_spectrum_margin(const Mat& a);

// g_{y(1), y(0)}: the full field integrated along the path.
PathMap internal_translation(FieldPtr field, Path path, const ode::Options& opts = {});

// |(dA + 1/2 [A ^ A])(u, v)(z)|, x-derivatives by central differences and the
// bracket of vector fields in z from field_jacobian.
double field_zero_curvature_residual(const InternalVectorField& field, const Vec& x, const Vec& z,
                                     const Vec& u, const Vec& v, const fd::Steps& steps = {});

// |u^k v^j [(nabla'_k a)_j - (nabla'_j a)_k] + T(a u, a v)| with
// (nabla'_k a)^s_j = D_k a^s_j + Gamma^s_{kl} a^l_j.
double structural_equation_residual(const InternalVectorField& field,
                                    const std::function<Christoffel(const Vec&)>& connection,
                                    const Vec& x, const Vec& u, const Vec& v,
                                    const fd::Steps& steps = {});

// max_{k,s,j} |(nabla'_k A)^s_j| at z = x.
double adjoint_boundary_residual(const InternalVectorField& field, const Christoffel& gamma,
                                 const Vec& x, const fd::Steps& steps = {});

// |A_x(s_x(z)) + D s_x(z) A_x(z)|.
double involution_skew_residual(const InternalVectorField& field, const InversiveStructure& s,
                                const Vec& x, const Vec& z);

// |s^+_x(Exp^-_x(v)) - Exp^+_x(-v)|.
double internal_geodesic_residual(const InternalVectorField& plus,
                                  const InternalVectorField& minus, const InversiveStructure& s_plus,
                                  const Vec& x, const Vec& v, const ode::Options& opts = {});

// H_x(z)_k = integral of (d_x s_x)(s_x^{-1}(z'))^j_k omega_{jm}(z') dz'^m along
// the chart segment from x to z.
Vec inversive_hamiltonian(const ManifoldModel& model, const InversiveStructure& s, const Vec& x,
                          const Vec& z, int panels = 4);

struct SymplecticInversiveReport {
  double omega_parallel = 0.0;   // |nabla omega| for the connection of s
  double cyclic_torsion = 0.0;   // cyclic sum of omega_js T^s_kl
  double diagonal_value = 0.0;   // |H_x(x)|
  double hamiltonian_field = 0.0;  // |D_z H - A^T omega| at z
  double inversion_relation = 0.0;  // |H^+_x(s^+_x(z)) + H^-_x(z)|
  double second_derivative = 0.0;   // diagonal second-derivative relation
};
SymplecticInversiveReport symplectic_inversive_checks(const ManifoldModel& model,
                                                      const InversivePtr& s_plus,
                                                      const InversivePtr& s_minus, const Vec& x,
                                                      const Vec& z, const fd::Steps& steps = {});

// ---- affine translocation -------------------------------------------------

class VectorField {
 public:
  virtual ~VectorField() = default;
  virtual std::string name() const = 0;
  virtual Vec value(const Vec& x) const = 0;
  virtual Mat jacobian(const Vec& x) const = 0;
};
using VectorFieldPtr = std::shared_ptr<const VectorField>;

// "linear" u = L x (L given), "rotation" u = (-x2, x1, 0, ...).
VectorFieldPtr make_vector_field(const std::string& name, const Mat& l = Mat());

// Covariant derivative (nabla u)^k_j = d_j u^k + Gamma^k_{sj} u^s.
Mat covariant_jacobian(const ManifoldModel& model, const VectorField& u, const Vec& x);

class AffineTranslocation {
 public:
  AffineTranslocation(ModelPtr model, FieldPtr fundamental, VectorFieldPtr u, Vec anchor,
                      ode::Options opts = {});

  Vec flow(double t, const Vec& x) const;  // X^t(x)
  struct Segment {
    Vec x, xdot, image;
    Mat jacobian;
  };
  Segment segment(double t, const Vec& z) const;
  // v^t_y(z) = [D P_t(z)]^{-1} (u(P_t z) - 1/2 A_{X}(P_t z) Xdot).
  Vec translocated_field(double t, const Vec& z) const;
  Vec translocated_flow(double t, const Vec& x) const;  // Z^t_y(x)
  const Vec& anchor() const { return y_; }
  const ManifoldModel& model() const { return *model_; }
  const VectorField& u() const { return *u_; }
  const ode::Options& options() const { return opts_; }

 private:
  ModelPtr model_;
  FieldPtr field_;
  VectorFieldPtr u_;
  Vec y_;
  ode::Options opts_;
};

struct AffineTranslocationReport {
  double factorization = 0.0;   // |X^t(x) - P_t(Z^t_y(x))|
  double equilibrium = 0.0;     // |v^t_y(y)|
  double linearisation = 0.0;   // |nabla v^t_y(y) - V^{-1} nabla u(X) V|
  double consistency = 0.0;     // max |nabla_u (nabla u)| along the trajectory
  double closed_form = 0.0;     // |dX^t(y) - V exp(t nabla u(y))|
};
AffineTranslocationReport affine_translocation_checks(const AffineTranslocation& tr, double t,
                                                      const Vec& x, int samples = 16);

}  // namespace dyngeo
