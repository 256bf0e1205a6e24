#pragma once

#include <memory>
#include <string>
#include <vector>

#include "dyngeo/manifold.hpp"
#include "dyngeo/ode.hpp"

namespace dyngeo {

// External scalar Hamiltonian in chart coordinates with exact derivatives.
class Hamiltonian {
 public:
  virtual ~Hamiltonian() = default;
  virtual std::string name() const = 0;
  virtual double value(const Vec& x) const = 0;
  virtual Vec gradient(const Vec& x) const = 0;
  virtual Mat hessian(const Vec& x) const = 0;
};

using HamiltonianPtr = std::shared_ptr<const Hamiltonian>;

struct HamiltonianParams {
  double radius = 1.0;       // sphere / disk radius
  double coefficient = 0.1;  // quartic / cubic strength
};

// "flat-oscillator" 1/2 |x|^2, "flat-quartic" 1/2 |x|^2 + c x1^4,
// "flat-cubic" 1/2 |x|^2 + c x1^3, "sphere-height" R (1 - r^2) / (1 + r^2),
// "hyperbolic-quadratic" 2 R r^2 / (1 - r^2).
HamiltonianPtr make_hamiltonian(const std::string& name, const HamiltonianParams& params = {});
std::vector<std::string> hamiltonian_names();

class HamiltonianSystem {
 public:
  HamiltonianSystem(ModelPtr model, HamiltonianPtr h, ode::Options opts = {});

  const ManifoldModel& model() const { return *model_; }
  const ModelPtr& model_ptr() const { return model_; }
  const Hamiltonian& hamiltonian() const { return *h_; }
  const ode::Options& options() const { return opts_; }

  // X_H = Psi^T grad H.
  Vec vector_field(const Vec& x) const;
  // D X_H, by central differences of the exact vector field.
  Mat vector_field_jacobian(const Vec& x) const;
  // Covariant Hessian of H.
  Mat covariant_hessian(const Vec& x) const;

  Vec flow(double t, const Vec& x) const;
  // Differential of the time-t flow (variational equation).
  LinearMap flow_differential(double t, const Vec& x) const;

 private:
  ModelPtr model_;
  HamiltonianPtr h_;
  ode::Options opts_;
};

}  // namespace dyngeo
