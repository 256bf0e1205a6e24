#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <string>

#include "dyngeo/field.hpp"
#include "dyngeo/finite_diff.hpp"
#include "dyngeo/ode.hpp"
#include "dyngeo/tensor.hpp"
#include "dyngeo/types.hpp"

namespace dyngeo {

class Path;

// Tangent-space linear map in chart coordinates, from T_source to T_target.
struct LinearMap {
  Mat matrix;
  Vec source;
  Vec target;
};

// Single-chart model of a manifold with symplectic form and affine connection.
class ManifoldModel {
 public:
  virtual ~ManifoldModel() = default;

  virtual std::string name() const = 0;
  virtual int dim() const = 0;
  // Radius of the chart ball used as the domain (infinite for flat models).
  virtual double cap() const = 0;
  virtual bool in_domain(const Vec& x) const = 0;

  virtual Mat omega(const Vec& x) const = 0;
  virtual Christoffel gamma(const Vec& x) const = 0;
  virtual std::optional<Tensor4> curvature_closed_form(const Vec&) const { return std::nullopt; }
  // Geodesic symmetries, when the model is a symmetric space.
  virtual FamilyPtr reflections() const { return nullptr; }

  virtual bool flat() const { return false; }
  virtual bool symplectic() const { return true; }
  virtual bool torsion_free() const { return true; }

  // Uniform sample from the chart ball of radius fraction * cap (fraction * 1
  // for unbounded charts).
  Vec sample(std::mt19937_64& rng, double fraction) const;
  // Uniform sample from the ball of radius r around c (clipped to the domain
  // by rejection).
  Vec sample_near(std::mt19937_64& rng, const Vec& c, double r) const;

  void require_domain(const Vec& x, const char* what) const;
};

using ModelPtr = std::shared_ptr<const ManifoldModel>;

// R^{2n} with the canonical form and the trivial connection.
class FlatModel final : public ManifoldModel {
 public:
  explicit FlatModel(int n = 1, Mat omega = Mat());
  std::string name() const override;
  int dim() const override { return 2 * n_; }
  double cap() const override { return std::numeric_limits<double>::infinity(); }
  bool in_domain(const Vec& x) const override;
  Mat omega(const Vec&) const override { return omega_; }
  Christoffel gamma(const Vec&) const override { return Christoffel(dim()); }
  std::optional<Tensor4> curvature_closed_form(const Vec&) const override { return Tensor4(dim()); }
  FamilyPtr reflections() const override;
  bool flat() const override { return true; }

 private:
  int n_;
  Mat omega_;
};

// Round sphere of radius R in the stereographic chart centred at the north
// pole, u -> R (2u, 1 - |u|^2) / (1 + |u|^2). omega is the area form.
class SphereModel final : public ManifoldModel {
 public:
  explicit SphereModel(double radius = 1.0, double cap = 2.0);
  std::string name() const override { return "sphere-s2"; }
  int dim() const override { return 2; }
  double cap() const override { return cap_; }
  bool in_domain(const Vec& x) const override;
  Mat omega(const Vec& x) const override;
  Christoffel gamma(const Vec& x) const override;
  std::optional<Tensor4> curvature_closed_form(const Vec& x) const override;
  FamilyPtr reflections() const override;
  double radius() const { return radius_; }

  // Chart <-> embedding in R^3.
  Eigen::Vector3d embed(const Vec& u) const;
  Vec chart(const Eigen::Vector3d& p) const;

 private:
  double radius_;
  double cap_;
};

// Hyperbolic plane of curvature -1/R^2 in the Poincare disk,
// metric 4R^2 |du|^2 / (1 - |u|^2)^2, omega the area form.
class HyperbolicModel final : public ManifoldModel {
 public:
  explicit HyperbolicModel(double radius = 1.0, double cap = 0.9);
  std::string name() const override { return "hyperbolic-h2"; }
  int dim() const override { return 2; }
  double cap() const override { return cap_; }
  bool in_domain(const Vec& x) const override;
  Mat omega(const Vec& x) const override;
  Christoffel gamma(const Vec& x) const override;
  std::optional<Tensor4> curvature_closed_form(const Vec& x) const override;
  FamilyPtr reflections() const override;
  double radius() const { return radius_; }

 private:
  double radius_;
  double cap_;
};

struct ModelParams {
  int n = 1;
  double radius = 1.0;
  std::optional<double> cap;
};

// "flat-r2", "flat-r4", "flat-r2n" (uses params.n), "sphere-s2", "hyperbolic-h2".
ModelPtr make_model(const std::string& name, const ModelParams& params = {});

// ---- operations -----------------------------------------------------------

// Psi = omega^{-1}. Throws SingularFormError when cond(omega) > max_condition.
Mat poisson_tensor(const ManifoldModel& model, const Vec& x, double max_condition = 1e12);

// R^s_{mjk} = d_j G^s_{mk} - d_k G^s_{mj} + G^s_{lj} G^l_{mk} - G^s_{lk} G^l_{mj},
// so that [nabla_j, nabla_k] u^s = R^s_{mjk} u^m. Derivatives of Gamma by
// central differences; when the model has a closed form, the two are compared
// and a mismatch above 1e-6 throws (model definition error).
Tensor4 curvature_tensor(const ManifoldModel& model, const Vec& x, const fd::Steps& steps = {});

// Christoffel derivatives dGamma[j](k, s, l) = d_j Gamma^k_{sl}.
std::vector<Christoffel> gamma_derivatives(const ManifoldModel& model, const Vec& x,
                                           const fd::Steps& steps = {});

// nabla^2_{jk} f = D^2_{jk} f - D_m f Gamma^m_{jk}, with D f and D^2 f supplied.
Mat covariant_hessian(const Christoffel& gamma, const Vec& grad, const Mat& hess);
// Same, with derivatives of f taken by finite differences.
Mat covariant_hessian(const ManifoldModel& model, const fd::ScalarFn& f, const Vec& x,
                      const fd::Steps& steps = {});

// dV/dt + Gamma(y)_{ydot} V = 0, V(0) = I, integrated over the whole path.
LinearMap parallel_transport(const ManifoldModel& model, const Path& path,
                             const ode::Options& opts = {});

// max_{k,i,j} |nabla_k omega_{ij}| for an arbitrary connection (direction index last).
double omega_covariant_residual(const ManifoldModel& model, const Vec& x,
                                const std::function<Christoffel(const Vec&)>& connection,
                                const fd::Steps& steps = {});
double omega_covariant_residual(const ManifoldModel& model, const Vec& x,
                                const fd::Steps& steps = {});

// max |M^T omega_target M - omega_source| entrywise.
double symplectic_defect(const Mat& m, const Mat& omega_source, const Mat& omega_target);

}  // namespace dyngeo
