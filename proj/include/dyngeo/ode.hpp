#pragma once

#include <functional>
#include <span>
#include <vector>

#include "dyngeo/types.hpp"

namespace dyngeo::ode {

struct Options {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double initial_step = 1e-3;
  // Relative to max(1, |t|).
  double min_step = 1e-13;
  long max_steps = 500000;
};

// dy/dt = f(t, y); the callee writes into dydt (already sized).
using Rhs = std::function<void(double t, const Vec& y, Vec& dydt)>;

// Adaptive Dormand-Prince 5(4) from t0 to t1 (either direction). Steps never
// cross an interior breakpoint, so piecewise-smooth right-hand sides are
// integrated one smooth piece at a time. Throws IntegrationError on step
// underflow, step budget exhaustion or a non-finite state.
Vec integrate(const Rhs& f, Vec y0, double t0, double t1, const Options& opts,
              std::span<const double> breakpoints = {});

// Same, but also returns the state at each requested time. `times` must be
// monotone in the direction of integration and lie within [t0, t1]; the
// integrator stops exactly on each of them.
std::vector<Vec> integrate_to(const Rhs& f, Vec y0, double t0, std::span<const double> times,
                              const Options& opts, std::span<const double> breakpoints = {});

}  // namespace dyngeo::ode
