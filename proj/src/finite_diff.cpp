#include "dyngeo/finite_diff.hpp"

#include <cmath>

#include "dyngeo/errors.hpp"

namespace dyngeo::fd {

Vec directional(const VectorFn& f, const Vec& x, const Vec& dir, double h, bool richardson) {
  auto central = [&](double step) -> Vec {
    return (f(x + step * dir) - f(x - step * dir)) / (2.0 * step);
  };
  if (!richardson) return central(h);
  const Vec coarse = central(h);
  const Vec fine = central(0.5 * h);
  return (4.0 * fine - coarse) / 3.0;
}

double directional(const ScalarFn& f, const Vec& x, const Vec& dir, double h, bool richardson) {
  auto central = [&](double step) { return (f(x + step * dir) - f(x - step * dir)) / (2.0 * step); };
  if (!richardson) return central(h);
  return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

Vec gradient(const ScalarFn& f, const Vec& x, double h, bool richardson) {
  Vec g(x.size());
  for (int i = 0; i < x.size(); ++i) {
    g[i] = directional(f, x, Vec::Unit(x.size(), i), h, richardson);
  }
  return g;
}

Mat jacobian(const VectorFn& f, const Vec& x, double h, bool richardson) {
  Mat jac;
  for (int j = 0; j < x.size(); ++j) {
    const Vec col = directional(f, x, Vec::Unit(x.size(), j), h, richardson);
    if (j == 0) jac.resize(col.size(), x.size());
    jac.col(j) = col;
  }
  return jac;
}

Mat hessian(const ScalarFn& f, const Vec& x, double h) {
  const int d = static_cast<int>(x.size());
  Mat hess(d, d);
  const double f0 = f(x);
  for (int i = 0; i < d; ++i) {
    const Vec ei = h * Vec::Unit(d, i);
    hess(i, i) = (f(x + ei) - 2.0 * f0 + f(x - ei)) / (h * h);
    for (int j = i + 1; j < d; ++j) {
      const Vec ej = h * Vec::Unit(d, j);
      const double v =
          (f(x + ei + ej) - f(x + ei - ej) - f(x - ei + ej) + f(x - ei - ej)) / (4.0 * h * h);
      hess(i, j) = v;
      hess(j, i) = v;
    }
  }
  return hess;
}

double loglog_slope(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw InvalidArgument("loglog_slope: need at least two matching samples");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) {
      throw InvalidArgument("loglog_slope: samples must be positive");
    }
    const double lx = std::log(xs[i]);
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace dyngeo::fd
