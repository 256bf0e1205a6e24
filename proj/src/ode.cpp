#include "dyngeo/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "dyngeo/errors.hpp"

namespace dyngeo::ode {

namespace {

namespace odeint = boost::numeric::odeint;
using State = std::vector<double>;

Vec to_vec(const State& s) { return Eigen::Map<const Vec>(s.data(), static_cast<Eigen::Index>(s.size())); }

bool finite(const State& s) {
  return std::all_of(s.begin(), s.end(), [](double v) { return std::isfinite(v); });
}

// Integrates a single smooth piece [t0, t1] in place.
void integrate_piece(const Rhs& f, State& y, double t0, double t1, const Options& opts,
                     long& steps) {
  if (t0 == t1) return;
  const double dir = t1 > t0 ? 1.0 : -1.0;
  Vec yv(static_cast<Eigen::Index>(y.size()));
  Vec dv(static_cast<Eigen::Index>(y.size()));
  auto system = [&](const State& s, State& ds, double t) {
    yv = Eigen::Map<const Vec>(s.data(), yv.size());
    dv.setZero();
    f(t, yv, dv);
    std::copy(dv.data(), dv.data() + dv.size(), ds.begin());
  };
  auto stepper = odeint::make_controlled(opts.abs_tol, opts.rel_tol,
                                         odeint::runge_kutta_dopri5<State>());
  double t = t0;
  double dt = dir * std::min(opts.initial_step, std::abs(t1 - t0));
  while (dir * (t1 - t) > 0.0) {
    if (dir * (t + dt - t1) > 0.0) dt = t1 - t;
    // Snap the last step onto t1 to avoid a sliver step.
    if (std::abs(t1 - (t + dt)) < 1e-14 * std::max(1.0, std::abs(t1))) dt = t1 - t;
    const double floor = opts.min_step * std::max(1.0, std::abs(t));
    if (std::abs(dt) < floor) {
      std::ostringstream msg;
      msg << "ode: step underflow at t=" << t << " (dt=" << dt << ")";
      throw IntegrationError(msg.str(), t, to_vec(y));
    }
    if (++steps > opts.max_steps) {
      throw IntegrationError("ode: step budget exhausted", t, to_vec(y));
    }
    const double t_before = t;
    if (stepper.try_step(system, y, t, dt) == odeint::success) {
      if (!finite(y)) throw IntegrationError("ode: non-finite state", t_before, to_vec(y));
      if (t == t_before) break;
    }
    // try_step adjusts dt for the next attempt on both success and failure.
    if (dir * (t1 - t) <= 1e-15 * std::max(1.0, std::abs(t1))) break;
  }
}

std::vector<double> cut_points(double t0, double t1, std::span<const double> breakpoints) {
  std::vector<double> cuts;
  const double lo = std::min(t0, t1);
  const double hi = std::max(t0, t1);
  for (double b : breakpoints) {
    if (b > lo && b < hi) cuts.push_back(b);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  if (t1 < t0) std::reverse(cuts.begin(), cuts.end());
  return cuts;
}

}  // namespace

Vec integrate(const Rhs& f, Vec y0, double t0, double t1, const Options& opts,
              std::span<const double> breakpoints) {
  State y(y0.data(), y0.data() + y0.size());
  if (!finite(y)) throw IntegrationError("ode: non-finite initial state", t0, y0);
  long steps = 0;
  double t = t0;
  for (double c : cut_points(t0, t1, breakpoints)) {
    integrate_piece(f, y, t, c, opts, steps);
    t = c;
  }
  integrate_piece(f, y, t, t1, opts, steps);
  return to_vec(y);
}

std::vector<Vec> integrate_to(const Rhs& f, Vec y0, double t0, std::span<const double> times,
                              const Options& opts, std::span<const double> breakpoints) {
  std::vector<Vec> out;
  out.reserve(times.size());
  State y(y0.data(), y0.data() + y0.size());
  long steps = 0;
  double t = t0;
  for (double target : times) {
    for (double c : cut_points(t, target, breakpoints)) {
      integrate_piece(f, y, t, c, opts, steps);
      t = c;
    }
    integrate_piece(f, y, t, target, opts, steps);
    t = target;
    out.push_back(to_vec(y));
  }
  return out;
}

}  // namespace dyngeo::ode
