#pragma once

#include <memory>
#include <string>
#include <vector>

#include "dyngeo/field.hpp"
#include "dyngeo/finite_diff.hpp"
#include "dyngeo/manifold.hpp"
#include "dyngeo/ode.hpp"
#include "dyngeo/path.hpp"

namespace dyngeo {

enum class EtherStrategy { ClosedForm, LineIntegral, Jet };

std::string to_string(EtherStrategy s);
EtherStrategy parse_strategy(const std::string& s);

// The intrinsic Hamiltonian 1-form H_x(z) = H_x(z)_k dx^k of a symplectic
// model. As an internal vector field, column k of field(x, z) is the
// Hamiltonian vector field of H_{x,k}: A = (G Psi)^T with G = grad_z.
class EtherField : public InternalVectorField {
 public:
  explicit EtherField(ModelPtr model);

  const ManifoldModel& model() const { return *model_; }
  const ModelPtr& model_ptr() const { return model_; }
  int dim() const override { return model_->dim(); }
  void require_domain(const Vec& z, const char* what) const override;

  virtual EtherStrategy strategy() const = 0;
  // H_x(z)_k, k = 0..d-1.
  virtual Vec eval(const Vec& x, const Vec& z) const = 0;
  // G(k, m) = d H_x(z)_k / d z^m.
  virtual Mat grad_z(const Vec& x, const Vec& z) const = 0;

  Mat field(const Vec& x, const Vec& z) const override;

  // s_x(z) by integrating ds/dtau = A_{p(tau)}(s) (x - z) along the chart
  // segment p(tau) = z + tau (x - z), s(0) = z.
  Vec reflect(const Vec& x, const Vec& z, const ode::Options& opts = {}) const;

 protected:
  ModelPtr model_;
};

using EtherPtr = std::shared_ptr<const EtherField>;

// H_x(z)_k = 2 omega_{kj} (z - x)^j on a flat model.
class FlatEther final : public EtherField {
 public:
  explicit FlatEther(ModelPtr model);
  EtherStrategy strategy() const override { return EtherStrategy::ClosedForm; }
  Vec eval(const Vec& x, const Vec& z) const override;
  Mat grad_z(const Vec& x, const Vec& z) const override;
  Mat field(const Vec& x, const Vec& z) const override;
  Mat field_jacobian(const Vec& x, const Vec& z, const Vec& w) const override;
};

// Reconstruction from a reflective structure: A_x(z) = (d_x s_x)(s_x(z)),
// d_m H_x(z)_k = A^j_k omega_{jm}(z), H integrated along the chart segment
// from x by composite Gauss-Legendre.
class ReflectionEther final : public EtherField {
 public:
  ReflectionEther(ModelPtr model, FamilyPtr reflections, int panels = 4);
  EtherStrategy strategy() const override { return EtherStrategy::LineIntegral; }
  Vec eval(const Vec& x, const Vec& z) const override;
  Mat grad_z(const Vec& x, const Vec& z) const override;
  Mat field(const Vec& x, const Vec& z) const override;
  const FamilyPtr& reflections() const { return reflections_; }

 private:
  FamilyPtr reflections_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

// Coordinate Taylor coefficients of H_x(z)_k in delta = z - x:
// H_k = p1_{ks} d^s + 1/2 p2_{k,ls} d^l d^s + 1/6 p3_{k,jls} d^j d^l d^s.
struct JetCoefficients {
  Vec x;
  int order = 0;
  int dim = 0;
  Mat p1;
  std::vector<double> p2;  // [k][l][s]
  std::vector<double> p3;  // [k][j][l][s], symmetric in (j, l, s)
  // Third covariant derivative nabla_j nabla_l nabla_s H_k = 2 omega_{sm} R^m_{lkj}.
  std::vector<double> covariant3;  // [j][l][s][k]

  double& c2(int k, int l, int s) { return p2[(k * dim + l) * dim + s]; }
  double c2(int k, int l, int s) const { return p2[(k * dim + l) * dim + s]; }
  double& c3(int k, int j, int l, int s) { return p3[((k * dim + j) * dim + l) * dim + s]; }
  double c3(int k, int j, int l, int s) const { return p3[((k * dim + j) * dim + l) * dim + s]; }
  double cov3(int j, int l, int s, int k) const {
    return covariant3[((j * dim + l) * dim + s) * dim + k];
  }

  Vec eval(const Vec& z) const;
  Mat grad(const Vec& z) const;
};

// Order <= 3. Throws InvalidArgument for higher orders.
JetCoefficients jet_expand(const ManifoldModel& model, const Vec& x, int order,
                           const fd::Steps& steps = {});

// Truncated jet series, valid for |z - x| <= radius (DomainError beyond).
class JetEther final : public EtherField {
 public:
  JetEther(ModelPtr model, int order = 3, double radius = 0.2);
  EtherStrategy strategy() const override { return EtherStrategy::Jet; }
  Vec eval(const Vec& x, const Vec& z) const override;
  Mat grad_z(const Vec& x, const Vec& z) const override;
  int order() const { return order_; }
  double radius() const { return radius_; }

 private:
  void check_radius(const Vec& x, const Vec& z) const;
  int order_;
  double radius_;
};

struct EtherParams {
  std::optional<EtherStrategy> strategy;
  int jet_order = 3;
  double jet_radius = 0.2;
  int quad_panels = 4;
};

// Closed form on flat models, line integral when the model has closed-form
// reflections, jet otherwise (unless overridden).
EtherPtr make_ether_field(const ModelPtr& model, const EtherParams& params = {});

// Gamma^j_{kl}(x) = -1/2 d^2 s^j_x / dz^k dz^l at z = x.
Christoffel connection_from_reflections(const PointFamily& s, const Vec& x,
                                        double h = 1e-4);

// H_x(z)_k as the integral of (d_x s_x)(s_x(z')) omega(z') dz' along `path`
// (from x to z), 16-point Gauss-Legendre on `panels` panels per smooth piece.
Vec ether_from_reflections(const ManifoldModel& model, const PointFamily& s, const Vec& x,
                           const Path& path, int panels = 8);

// |(dH + 1/2 {H ^ H})(u, v)| at (x, z): v.D_u H - u.D_v H + u^T G Psi G^T v,
// x-derivatives by central differences.
double zero_curvature_residual(const EtherField& field, const Vec& x, const Vec& z, const Vec& u,
                               const Vec& v, const fd::Steps& steps = {});

struct BoundaryResiduals {
  double value = 0.0;     // |H_x(x)|
  double gradient = 0.0;  // |grad_z H - 2 omega| at z = x
  double hessian = 0.0;   // covariant z-Hessian of H_{x,k} at z = x
};
BoundaryResiduals boundary_residuals(const EtherField& field, const Vec& x,
                                     const fd::Steps& steps = {});

// |H_x(s_x(z)) + H_x(z)|, using the model's closed-form reflection when
// available.
double skew_symmetry_residual(const EtherField& field, const Vec& x, const Vec& z);

}  // namespace dyngeo
