#pragma once

#include "dyngeo/ether.hpp"
#include "dyngeo/path_map.hpp"

namespace dyngeo {

enum class AuxiliaryPath { Straight, Bulge };

struct PhaseOptions {
  double newton_tol = 1e-10;
  int newton_max_iter = 50;
  int start_level = 8;     // initial cells per side of the (s, u) mesh
  int max_level = 512;
  double mesh_tol = 1e-6;  // stop refining when two levels differ by less
  double fd_step = 1e-4;   // x-differences for dPhi and endpoint variations
  AuxiliaryPath aux = AuxiliaryPath::Straight;
  double bulge = 0.3;      // bulge amplitude relative to |x~ - sigma(0)|
};

struct FixedPoint {
  Vec point;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Fixed point of s_x o [sigma] by damped Newton with a difference Jacobian,
// started at x and, failing that, at the midpoint of the path.
FixedPoint reflection_fixed_point(const EtherField& field, const PathMap& sigma, const Vec& x,
                                  const PhaseOptions& opts = {});

// v with Exp_x(v) = target, by Newton.
Vec shoot_exponential(const EtherField& field, const Vec& x, const Vec& target,
                      const PhaseOptions& opts = {});

// The membrane with boundary c (x~ -> sigma(0)), sigma, [sigma](c) reversed
// and the Ether geodesic from [sigma](x~) through x back to x~, realised as
// a ruled surface and integrated on an n x n triangulated parameter mesh.
// The sign is that of the generating function (dPhi = -H_x(x~)).
double membrane_area(const EtherPtr& field, const PathMap& sigma, const Vec& x, const Vec& x_tilde,
                     int n, const PhaseOptions& opts = {});

struct GeneratingPhase {
  Vec x;
  Vec x_tilde;
  Vec image;  // [sigma](x~)
  double phi = 0.0;
  Vec dphi;
  Vec h_x_tilde;  // H_x(x~)
  double dphi_residual = 0.0;  // |dPhi + H_x(x~)|
  int level = 0;               // mesh cells per side used
  double mesh_change = 0.0;    // |Phi(level) - Phi(level / 2)|
  int newton_iterations = 0;
};

// Throws ConvergenceError when Newton fails.
GeneratingPhase generating_phase(const EtherPtr& field, const PathMap& sigma, const Vec& x,
                                 const PhaseOptions& opts = {});

// Phi at a fixed mesh level, including the fixed-point solve.
double phase_value(const EtherPtr& field, const PathMap& sigma, const Vec& x, int level,
                   const PhaseOptions& opts = {});

// Per-direction residuals of d Phi / d sigma'' + 1/2 H_{sigma''}([sigma](x~)),
// the endpoint moved by extending the path with a short segment.
Vec hamilton_jacobi_residual(const EtherPtr& field, const PathMap& sigma, const Vec& x, int level,
                             const PhaseOptions& opts = {});

}  // namespace dyngeo
