#pragma once

#include <vector>

#include "dyngeo/ether.hpp"
#include "dyngeo/path_map.hpp"

namespace dyngeo {

// Closed path based at `basepoint`.
struct Loop {
  Path path;
  Vec basepoint;
};

// Signed coordinate areas sigma(j, k) = closed integral of y^k dy^j, i.e. the
// area of the projection to the (j, k) plane oriented by dx^k ^ dx^j.
Mat loop_areas(const Path& loop, int panels = 16);

// Square loop in the (j, k) coordinate plane with sigma(j, k) = area (either
// sign), corners eased so the loop is C^1.
Loop coordinate_square(const Vec& base, int j, int k, double area);

// Chart circle centred at `center` through `base`.
Loop circle_loop(const Vec& base, const Vec& center, int i = 0, int j = 1, bool ccw = true);

// Loop traversed `times` times.
Loop repeat(const Loop& loop, int times);

PathMap dynamic_holonomy(const EtherPtr& field, const Loop& loop, const ode::Options& opts = {});
LinearMap kinematic_holonomy(const EtherPtr& field, const Loop& loop, const ode::Options& opts = {});

// Rotation angle of a 2x2 holonomy matrix, atan2(m10, m00).
double rotation_angle(const Mat& m);

// R_jk(z) = 1/4 {H_{0k}, H_{0j}}(z).
double ether_curvature(const EtherField& field, const Vec& base, int j, int k, const Vec& z);
// Hamiltonian vector field of R_jk at z (gradient by central differences).
Vec ether_curvature_field(const EtherField& field, const Vec& base, int j, int k, const Vec& z,
                          double h = 1e-5);

struct SmallLoopReport {
  std::vector<double> areas;
  std::vector<double> deltas;
  double slope = 0.0;
};

// delta(eps) = |[sigma_eps]^{-1}(z) - (z + eps X_{R_jk}(z))| for squares with
// sigma(j, k) = eps, and the log-log slope of delta against eps.
SmallLoopReport small_loop_expansion(const EtherPtr& field, const Vec& base, int j, int k,
                                     const std::vector<double>& areas, const Vec& z,
                                     const ode::Options& opts = {});

struct DiagonalReport {
  double value = 0.0;          // max |R_jk(0) - omega_jk(0)|
  double gradient = 0.0;       // max |grad R_jk(0)|
  double hessian = 0.0;        // max |nabla^2_lm R_jk(0) - 2 omega_ls R^s_mjk|
  double sp_membership = 0.0;  // max |(omega R_jk)^T - omega R_jk|
};
DiagonalReport diagonal_identities(const EtherField& field, const Vec& base,
                                   const fd::Steps& steps = {});

// |[lambda](z) - ([sigma]^{-1} o [lambda'] o [sigma])(z)| with lambda' the
// loop lambda conjugated to the far end of sigma.
double holonomy_conjugacy_residual(const EtherPtr& field, const Loop& lambda, const Path& sigma,
                                   const Vec& z, const ode::Options& opts = {});

}  // namespace dyngeo
