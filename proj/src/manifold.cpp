#include "dyngeo/manifold.hpp"

#include <cmath>
#include <sstream>

#include "dyngeo/errors.hpp"
#include "dyngeo/path.hpp"

namespace dyngeo {

Mat poisson_tensor(const ManifoldModel& model, const Vec& x, double max_condition) {
  model.require_domain(x, "poisson_tensor");
  const Mat w = model.omega(x);
  Eigen::JacobiSVD<Mat> svd(w);
  const auto& sv = svd.singularValues();
  const double smin = sv[sv.size() - 1];
  if (!(smin > 0.0) || sv[0] / smin > max_condition) {
    std::ostringstream msg;
    msg << "poisson_tensor: omega singular at (" << x.transpose() << "), condition "
        << (smin > 0.0 ? sv[0] / smin : std::numeric_limits<double>::infinity());
    throw SingularFormError(msg.str());
  }
  return w.inverse();
}

std::vector<Christoffel> gamma_derivatives(const ManifoldModel& model, const Vec& x,
                                           const fd::Steps& steps) {
  const int d = model.dim();
  std::vector<Christoffel> out;
  out.reserve(d);
  for (int j = 0; j < d; ++j) {
    const Vec e = Vec::Unit(d, j);
    auto central = [&](double h) {
      return (model.gamma(x + h * e) - model.gamma(x - h * e)) * (1.0 / (2.0 * h));
    };
    if (steps.richardson) {
      out.push_back((central(0.5 * steps.first) * 4.0 - central(steps.first)) * (1.0 / 3.0));
    } else {
      out.push_back(central(steps.first));
    }
  }
  return out;
}

Tensor4 curvature_tensor(const ManifoldModel& model, const Vec& x, const fd::Steps& steps) {
  model.require_domain(x, "curvature_tensor");
  const int d = model.dim();
  const Christoffel g = model.gamma(x);
  const auto dg = gamma_derivatives(model, x, steps);
  Tensor4 r(d);
  for (int s = 0; s < d; ++s)
    for (int m = 0; m < d; ++m)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
          double v = dg[j](s, m, k) - dg[k](s, m, j);
          for (int l = 0; l < d; ++l) v += g(s, l, j) * g(l, m, k) - g(s, l, k) * g(l, m, j);
          r(s, m, j, k) = v;
        }
  if (auto closed = model.curvature_closed_form(x)) {
    const double gap = (r - *closed).max_abs();
    if (gap > 1e-6) {
      std::ostringstream msg;
      msg << "curvature_tensor: closed form of " << model.name() << " disagrees with Christoffel "
          << "derivatives by " << gap << " at (" << x.transpose() << ")";
      throw DyngeoError(msg.str());
    }
    return *closed;
  }
  return r;
}

Mat covariant_hessian(const Christoffel& gamma, const Vec& grad, const Mat& hess) {
  const int d = static_cast<int>(grad.size());
  Mat out = hess;
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k)
      for (int m = 0; m < d; ++m) out(j, k) -= grad[m] * gamma(m, j, k);
  return out;
}

Mat covariant_hessian(const ManifoldModel& model, const fd::ScalarFn& f, const Vec& x,
                      const fd::Steps& steps) {
  model.require_domain(x, "covariant_hessian");
  const Vec grad = fd::gradient(f, x, steps.first, steps.richardson);
  const Mat hess = fd::hessian(f, x, steps.second);
  return covariant_hessian(model.gamma(x), grad, hess);
}

LinearMap parallel_transport(const ManifoldModel& model, const Path& path, const ode::Options& opts) {
  const int d = model.dim();
  const Vec y0 = path.start();
  model.require_domain(y0, "parallel_transport");
  const Mat eye = Mat::Identity(d, d);
  const Vec state = Eigen::Map<const Vec>(eye.data(), d * d);
  auto rhs = [&](double t, const Vec& v, Vec& dv) {
    const Vec y = path.point(t);
    model.require_domain(y, "parallel_transport");
    const Mat gv = model.gamma(y).contract(path.velocity(t));
    const Eigen::Map<const Mat> vm(v.data(), d, d);
    Eigen::Map<Mat>(dv.data(), d, d) = -gv * vm;
  };
  const Vec out = ode::integrate(rhs, state, 0.0, 1.0, opts, path.knots());
  return {Eigen::Map<const Mat>(out.data(), d, d), y0, path.end()};
}

double omega_covariant_residual(const ManifoldModel& model, const Vec& x,
                                const std::function<Christoffel(const Vec&)>& connection,
                                const fd::Steps& steps) {
  model.require_domain(x, "omega_covariant_residual");
  const int d = model.dim();
  const Mat w = model.omega(x);
  const Christoffel g = connection(x);
  double worst = 0.0;
  for (int k = 0; k < d; ++k) {
    const Vec e = Vec::Unit(d, k);
    auto central = [&](double h) -> Mat {
      return (model.omega(x + h * e) - model.omega(x - h * e)) / (2.0 * h);
    };
    const Mat dw = steps.richardson ? Mat((4.0 * central(0.5 * steps.first) - central(steps.first)) / 3.0)
                                    : central(steps.first);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double v = dw(i, j);
        for (int m = 0; m < d; ++m) v -= g(m, i, k) * w(m, j) + g(m, j, k) * w(i, m);
        worst = std::max(worst, std::abs(v));
      }
  }
  return worst;
}

double omega_covariant_residual(const ManifoldModel& model, const Vec& x, const fd::Steps& steps) {
  return omega_covariant_residual(
      model, x, [&model](const Vec& p) { return model.gamma(p); }, steps);
}

double symplectic_defect(const Mat& m, const Mat& omega_source, const Mat& omega_target) {
  return (m.transpose() * omega_target * m - omega_source).cwiseAbs().maxCoeff();
}

}  // namespace dyngeo
