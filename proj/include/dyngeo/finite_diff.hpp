#pragma once

#include <functional>
#include <span>

#include "dyngeo/types.hpp"

namespace dyngeo::fd {

// Default steps: h = 1e-5 for first derivatives, 1e-3 for second and third,
// one level of Richardson extrapolation on first derivatives.
struct Steps {
  double first = 1e-5;
  double second = 1e-3;
  bool richardson = true;
};

using ScalarFn = std::function<double(const Vec&)>;
using VectorFn = std::function<Vec(const Vec&)>;

// Central difference along `dir` (not normalized), Richardson-extrapolated
// from steps h and h/2 when requested.
Vec directional(const VectorFn& f, const Vec& x, const Vec& dir, double h, bool richardson = true);
double directional(const ScalarFn& f, const Vec& x, const Vec& dir, double h,
                   bool richardson = true);

Vec gradient(const ScalarFn& f, const Vec& x, double h = 1e-5, bool richardson = true);

// J(i, j) = d f_i / d x_j.
Mat jacobian(const VectorFn& f, const Vec& x, double h = 1e-5, bool richardson = true);

// Second derivatives by the standard 4-point mixed stencil.
Mat hessian(const ScalarFn& f, const Vec& x, double h = 1e-3);

// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> xs, std::span<const double> ys);

}  // namespace dyngeo::fd
