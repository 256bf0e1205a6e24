#pragma once

#include "dyngeo/ether.hpp"
#include "dyngeo/hamiltonian.hpp"

namespace dyngeo {

// A Hamiltonian system translocated to the anchor y: the time-dependent
// Hamiltonian H^t_y(z) = H(P_t z) - 1/2 Xdot . H_{X}(P_t z) - H(y), with
// X = X^t(y) and P_t the symplectic path of the trajectory segment from y.
class TranslocatedSystem {
 public:
  TranslocatedSystem(EtherPtr field, HamiltonianSystem system, Vec anchor);

  const Vec& anchor() const { return y_; }
  const HamiltonianSystem& system() const { return system_; }
  const EtherField& field() const { return *field_; }

  struct Segment {
    Vec x;     // X^t(y)
    Vec xdot;  // X_H(X^t(y))
    Vec image; // P_t(z)
    Mat jacobian;  // D P_t(z), only when requested
  };
  // The trajectory segment and its symplectic path applied to z, integrated
  // jointly along the trajectory.
  Segment segment(double t, const Vec& z, bool with_jacobian = false) const;

  double value(double t, const Vec& z) const;
  // Exact gradient: DP^T (grad H(P) - 1/2 G_X(P)^T Xdot).
  Vec gradient(double t, const Vec& z) const;
  // Z^t_y(x): flow of the time-dependent translocated Hamiltonian.
  Vec flow(double t, const Vec& x) const;

 private:
  EtherPtr field_;
  HamiltonianSystem system_;
  Vec y_;
};

// |X^t(x) - P_t(Z^t_y(x))|.
double factorization_residual(const TranslocatedSystem& sys, double t, const Vec& x);

struct HessianReport {
  Mat fd_hessian;  // Hessian of H^t_y at y by differences of the exact gradient
  Mat predicted;   // V^T nabla^2 H(X^t(y)) V
  double residual = 0.0;
};
HessianReport hessian_check(const TranslocatedSystem& sys, double t, double h = 1e-4);

struct MonodromyFactorization {
  Mat v;   // parallel transport along the trajectory
  Mat w;   // dW/dt = M W, M = -Psi(y) V^T nabla^2 H(X) V
  Mat dx;  // differential of the time-t flow at y
  double residual = 0.0;  // max |dx - V W|
};
MonodromyFactorization first_variation(const TranslocatedSystem& sys, double t);

// max over `samples` trajectory points of |nabla_{X_H} nabla^2 H|.
double covariant_quadratic_residual(const HamiltonianSystem& system, const Vec& y, double t,
                                    int samples = 16);

// |dX^t(y) - V exp(-t Psi(y) nabla^2 H(y))| given a computed factorization.
double closed_form_monodromy_residual(const TranslocatedSystem& sys, double t,
                                      const MonodromyFactorization& f);

}  // namespace dyngeo
