#include "dyngeo/holonomy.hpp"

#include <cmath>
#include <numbers>

#include "dyngeo/errors.hpp"
#include "dyngeo/quadrature.hpp"

namespace dyngeo {

Mat loop_areas(const Path& loop, int panels) {
  const int d = loop.dim();
  const auto rule = quad::composite_gauss_legendre(panels);
  std::vector<double> cuts{0.0};
  for (double k : loop.knots()) cuts.push_back(k);
  cuts.push_back(1.0);
  Mat out = Mat::Zero(d, d);
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double a = cuts[p], len = cuts[p + 1] - cuts[p];
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double t = a + len * rule.nodes[i];
      const Vec y = loop.point(t);
      const Vec v = loop.velocity(t);
      out += len * rule.weights[i] * (v * y.transpose());
    }
  }
  return 0.5 * (out - out.transpose());
}

Loop coordinate_square(const Vec& base, int j, int k, double area) {
  const int d = static_cast<int>(base.size());
  if (j == k || j < 0 || k < 0 || j >= d || k >= d) {
    throw InvalidArgument("coordinate_square: need two distinct coordinate indices");
  }
  const double side = std::sqrt(std::abs(area));
  const Vec ej = side * Vec::Unit(d, j);
  const Vec ek = side * Vec::Unit(d, k);
  // Traversing e_k before e_j gives sigma(j, k) = +side^2.
  const bool positive = area >= 0.0;
  const Vec first = positive ? ek : ej;
  const Vec second = positive ? ej : ek;
  return {eased_polyline({base, base + first, base + first + second, base + second, base}), base};
}

Loop circle_loop(const Vec& base, const Vec& center, int i, int j, bool ccw) {
  return {Path::circle(base, center, i, j, ccw), base};
}

Loop repeat(const Loop& loop, int times) {
  if (times < 1) throw InvalidArgument("repeat: times must be >= 1");
  Path out = loop.path;
  for (int n = 1; n < times; ++n) out = Path::concat(out, loop.path);
  return {out, loop.basepoint};
}

PathMap dynamic_holonomy(const EtherPtr& field, const Loop& loop, const ode::Options& opts) {
  return path_symplectomorphism(field, loop.path, opts);
}

LinearMap kinematic_holonomy(const EtherPtr& field, const Loop& loop, const ode::Options& opts) {
  return dynamic_holonomy(field, loop, opts).differential(loop.basepoint);
}

double rotation_angle(const Mat& m) { return std::atan2(m(1, 0), m(0, 0)); }

double ether_curvature(const EtherField& field, const Vec& base, int j, int k, const Vec& z) {
  const Mat g = field.grad_z(base, z);
  const Mat psi = poisson_tensor(field.model(), z);
  return 0.25 * g.row(k).dot(psi * g.row(j).transpose());
}

Vec ether_curvature_field(const EtherField& field, const Vec& base, int j, int k, const Vec& z,
                          double h) {
  const Vec grad = fd::gradient(
      [&](const Vec& p) { return ether_curvature(field, base, j, k, p); }, z, h, true);
  return poisson_tensor(field.model(), z).transpose() * grad;
}

SmallLoopReport small_loop_expansion(const EtherPtr& field, const Vec& base, int j, int k,
                                     const std::vector<double>& areas, const Vec& z,
                                     const ode::Options& opts) {
  SmallLoopReport out;
  out.areas = areas;
  out.deltas.resize(areas.size());
  const Vec x_r = ether_curvature_field(*field, base, j, k, z);
  const long n = static_cast<long>(areas.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    const double eps = areas[i];
    if (eps == 0.0) {
      out.deltas[i] = 0.0;
      continue;
    }
    const auto loop = coordinate_square(base, j, k, eps);
    const Vec pulled = dynamic_holonomy(field, loop, opts).inverse(z);
    out.deltas[i] = (pulled - (z + eps * x_r)).norm();
  }
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < areas.size(); ++i) {
    if (areas[i] != 0.0 && out.deltas[i] > 0.0) {
      xs.push_back(std::abs(areas[i]));
      ys.push_back(out.deltas[i]);
    }
  }
  out.slope = xs.size() >= 2 ? fd::loglog_slope(xs, ys) : std::numeric_limits<double>::quiet_NaN();
  return out;
}

DiagonalReport diagonal_identities(const EtherField& field, const Vec& base,
                                   const fd::Steps& steps) {
  const auto& model = field.model();
  const int d = model.dim();
  const Mat w = model.omega(base);
  const Tensor4 r = curvature_tensor(model, base, steps);
  const Christoffel gam = model.gamma(base);
  DiagonalReport out;
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      auto rjk = [&](const Vec& p) { return ether_curvature(field, base, j, k, p); };
      out.value = std::max(out.value, std::abs(rjk(base) - w(j, k)));
      const Vec grad = fd::gradient(rjk, base, steps.first, steps.richardson);
      out.gradient = std::max(out.gradient, grad.cwiseAbs().maxCoeff());
      const Mat hess = covariant_hessian(gam, grad, fd::hessian(rjk, base, steps.second));
      for (int l = 0; l < d; ++l)
        for (int m = 0; m < d; ++m) {
          double expected = 0.0;
          for (int s = 0; s < d; ++s) expected += 2.0 * w(l, s) * r(s, m, j, k);
          out.hessian = std::max(out.hessian, std::abs(hess(l, m) - expected));
        }
      const Mat wr = w * r.matrix(j, k);
      out.sp_membership = std::max(out.sp_membership, (wr.transpose() - wr).cwiseAbs().maxCoeff());
    }
  return out;
}

double holonomy_conjugacy_residual(const EtherPtr& field, const Loop& lambda, const Path& sigma,
                                   const Vec& z, const ode::Options& opts) {
  const Path conjugated = Path::concat(Path::concat(sigma.reversed(), lambda.path), sigma);
  const auto s = path_symplectomorphism(field, sigma, opts);
  const auto lam = path_symplectomorphism(field, lambda.path, opts);
  const auto lam_y = path_symplectomorphism(field, conjugated, opts);
  return (lam.evaluate(z) - s.inverse(lam_y.evaluate(s.evaluate(z)))).norm();
}

}  // namespace dyngeo
