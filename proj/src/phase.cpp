#include "dyngeo/phase.hpp"

#include <array>
#include <cmath>
#include <map>
#include <sstream>

#include "dyngeo/errors.hpp"

namespace dyngeo {

namespace {

FixedPoint newton(const std::function<Vec(const Vec&)>& f, Vec z, const PhaseOptions& opts) {
  FixedPoint out;
  Vec r = f(z);
  for (int it = 0; it < opts.newton_max_iter; ++it) {
    out.iterations = it;
    if (r.norm() < opts.newton_tol) {
      out.converged = true;
      break;
    }
    const Mat j = fd::jacobian(f, z, 1e-6, true);
    const Vec step = j.fullPivLu().solve(-r);
    double lambda = 1.0;
    bool accepted = false;
    for (int k = 0; k < 30; ++k) {
      try {
        const Vec trial = z + lambda * step;
        const Vec rt = f(trial);
        if (rt.allFinite() && rt.norm() < r.norm()) {
          z = trial;
          r = rt;
          accepted = true;
          break;
        }
      } catch (const DyngeoError&) {
      }
      lambda *= 0.5;
    }
    if (!accepted) break;
  }
  out.point = z;
  out.residual = r.norm();
  if (r.norm() < opts.newton_tol) out.converged = true;
  return out;
}

Vec perpendicular(const Vec& dir) {
  Vec p = Vec::Zero(dir.size());
  if (dir.size() >= 2) {
    p[0] = -dir[1];
    p[1] = dir[0];
  }
  if (p.norm() == 0.0) p[0] = dir.norm();
  return p;
}

Path auxiliary_path(const Vec& from, const Vec& to, const PhaseOptions& opts) {
  if (opts.aux == AuxiliaryPath::Straight) return Path::line(from, to);
  return Path::bulge(from, to, opts.bulge * perpendicular(to - from));
}

// Boundary data of the ruled membrane at one parameter value s.
struct Sample {
  Vec a, da, b, db;
};

class Membrane {
 public:
  Membrane(const EtherPtr& field, const PathMap& sigma, const Vec& x, const Vec& x_tilde,
           const PhaseOptions& opts)
      : field_(field),
        sigma_(sigma),
        x_(x),
        c_(auxiliary_path(x_tilde, sigma.path().start(), opts)),
        v_(shoot_exponential(*field, x, x_tilde, opts)) {}

  double integrate(int n) {
    const auto& model = field_->model();
    const double h = 1.0 / n;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double s0 = i * h, s1 = (i + 1) * h, u0 = j * h, u1 = (j + 1) * h;
        const std::array<std::array<double, 2>, 3> lower{{{s0, u0}, {s1, u0}, {s1, u1}}};
        const std::array<std::array<double, 2>, 3> upper{{{s0, u0}, {s1, u1}, {s0, u1}}};
        for (const auto& tri : {lower, upper}) {
          const double cs = (tri[0][0] + tri[1][0] + tri[2][0]) / 3.0;
          double acc = 0.0;
          for (int e = 0; e < 3; ++e) {
            const double s = 0.5 * (tri[e][0] + tri[(e + 1) % 3][0]);
            const double u = 0.5 * (tri[e][1] + tri[(e + 1) % 3][1]);
            const Sample& smp = sample(s, cs);
            const Vec f = (1.0 - u) * smp.a + u * smp.b;
            const Vec fs = (1.0 - u) * smp.da + u * smp.db;
            const Vec fu = smp.b - smp.a;
            acc += fu.dot(model.omega(f) * fs);
          }
          total += acc / 3.0 * 0.5 * h * h;
        }
      }
    }
    return total;
  }

 private:
  // Velocities are one-sided towards the triangle (centroid cs), so kinks of
  // the boundary curves on mesh lines are integrated exactly.
  const Sample& sample(double s, double cs) {
    const int side = cs < s ? -1 : 1;
    const auto key = std::make_pair(s, side);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const double eps = 1e-13 * side;
    const bool first_half = s < 0.5 || (s == 0.5 && side < 0);
    Sample smp;
    if (first_half) {
      const double r = std::clamp(2.0 * s, 0.0, 1.0);
      const double rv = std::clamp(r + eps, 0.0, 1.0);
      smp.a = c_.point(r);
      smp.da = 2.0 * c_.velocity(rv);
      const double tau = 1.0 - 2.0 * r;
      smp.b = ether_exponential(*field_, x_, v_, tau, sigma_.options());
      smp.db = -2.0 * (field_->field(x_, smp.b) * v_);
    } else {
      const double r = std::clamp(2.0 * s - 1.0, 0.0, 1.0);
      const double rv = std::clamp(r + eps, 0.0, 1.0);
      smp.a = sigma_.path().point(r);
      smp.da = 2.0 * sigma_.path().velocity(rv);
      const auto dm = sigma_.differential(c_.point(r));
      smp.b = dm.target;
      smp.db = 2.0 * (dm.matrix * c_.velocity(rv));
    }
    return cache_.emplace(key, std::move(smp)).first->second;
  }

  EtherPtr field_;
  const PathMap& sigma_;
  Vec x_;
  Path c_;
  Vec v_;
  std::map<std::pair<double, int>, Sample> cache_;
};

}  // namespace

FixedPoint reflection_fixed_point(const EtherField& field, const PathMap& sigma, const Vec& x,
                                  const PhaseOptions& opts) {
  auto f = [&](const Vec& z) -> Vec { return reflect_point(field, x, sigma.evaluate(z)) - z; };
  FixedPoint fp = newton(f, x, opts);
  if (!fp.converged) {
    FixedPoint second = newton(f, sigma.path().point(0.5), opts);
    second.iterations += fp.iterations;
    return second;
  }
  return fp;
}

Vec shoot_exponential(const EtherField& field, const Vec& x, const Vec& target,
                      const PhaseOptions& opts) {
  auto f = [&](const Vec& v) -> Vec { return ether_exponential(field, x, v, 1.0) - target; };
  const FixedPoint sol = newton(f, target - x, opts);
  if (!sol.converged) {
    std::ostringstream msg;
    msg << "shoot_exponential: no v with Exp_x(v) = target, residual " << sol.residual;
    throw ConvergenceError(msg.str());
  }
  return sol.point;
}

double membrane_area(const EtherPtr& field, const PathMap& sigma, const Vec& x, const Vec& x_tilde,
                     int n, const PhaseOptions& opts) {
  Membrane m(field, sigma, x, x_tilde, opts);
  return m.integrate(n);
}

namespace {

Vec solve_fixed_point(const EtherField& field, const PathMap& sigma, const Vec& x,
                      const PhaseOptions& opts, int* iterations = nullptr) {
  const FixedPoint fp = reflection_fixed_point(field, sigma, x, opts);
  if (!fp.converged) {
    std::ostringstream msg;
    msg << "generating_phase: s_x o [sigma] has no fixed point found from x = (" << x.transpose()
        << "), residual " << fp.residual;
    throw ConvergenceError(msg.str());
  }
  if (iterations) *iterations = fp.iterations;
  return fp.point;
}

}  // namespace

double phase_value(const EtherPtr& field, const PathMap& sigma, const Vec& x, int level,
                   const PhaseOptions& opts) {
  const Vec xt = solve_fixed_point(*field, sigma, x, opts);
  return membrane_area(field, sigma, x, xt, level, opts);
}

GeneratingPhase generating_phase(const EtherPtr& field, const PathMap& sigma, const Vec& x,
                                 const PhaseOptions& opts) {
  GeneratingPhase out;
  out.x = x;
  out.x_tilde = solve_fixed_point(*field, sigma, x, opts, &out.newton_iterations);
  out.image = sigma.evaluate(out.x_tilde);
  out.h_x_tilde = field->eval(x, out.x_tilde);

  Membrane m(field, sigma, x, out.x_tilde, opts);
  int n = opts.start_level;
  double prev = m.integrate(n);
  double change = std::numeric_limits<double>::infinity();
  while (n < opts.max_level) {
    n *= 2;
    const double cur = m.integrate(n);
    change = std::abs(cur - prev);
    prev = cur;
    if (change < opts.mesh_tol) break;
  }
  out.phi = prev;
  out.level = n;
  out.mesh_change = change;

  const int d = static_cast<int>(x.size());
  out.dphi = Vec::Zero(d);
  for (int i = 0; i < d; ++i) {
    const Vec e = opts.fd_step * Vec::Unit(d, i);
    out.dphi[i] = (phase_value(field, sigma, x + e, n, opts) -
                   phase_value(field, sigma, x - e, n, opts)) /
                  (2.0 * opts.fd_step);
  }
  out.dphi_residual = (out.dphi + out.h_x_tilde).cwiseAbs().maxCoeff();
  return out;
}

Vec hamilton_jacobi_residual(const EtherPtr& field, const PathMap& sigma, const Vec& x, int level,
                             const PhaseOptions& opts) {
  const Vec end = sigma.path().end();
  const int d = static_cast<int>(x.size());
  const Vec xt = solve_fixed_point(*field, sigma, x, opts);
  const Vec image = sigma.evaluate(xt);
  const Vec h_end = field->eval(end, image);
  Vec out(d);
  for (int i = 0; i < d; ++i) {
    auto extended = [&](double h) {
      const Path p = Path::concat(sigma.path(), Path::line(end, end + h * Vec::Unit(d, i)));
      return phase_value(field, PathMap(sigma.field(), p, sigma.factor(), sigma.options()), x,
                         level, opts);
    };
    const double h = opts.fd_step;
    const double dphi = (extended(h) - extended(-h)) / (2.0 * h);
    out[i] = dphi + 0.5 * h_end[i];
  }
  return out;
}

}  // namespace dyngeo
