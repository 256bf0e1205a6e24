#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/AutoDiff>

namespace dyngeo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// First-order forward-mode scalar; derivative vector sized at seeding time.
using AD = Eigen::AutoDiffScalar<Eigen::VectorXd>;
using ADVec = Eigen::Matrix<AD, Eigen::Dynamic, 1>;

// Seeds `x` as the independent variables of an AD evaluation: entry i gets
// unit derivative e_i out of `n_total` directions, offset by `offset`.
inline ADVec seed(const Vec& x, int offset, int n_total) {
  ADVec out(x.size());
  for (int i = 0; i < x.size(); ++i) {
    out[i] = AD(x[i], n_total, offset + i);
  }
  return out;
}

// Constant AD vector (zero derivative of length n_total).
inline ADVec constant(const Vec& x, int n_total) {
  ADVec out(x.size());
  for (int i = 0; i < x.size(); ++i) {
    out[i] = AD(x[i], Eigen::VectorXd::Zero(n_total));
  }
  return out;
}

inline Vec values(const ADVec& v) {
  Vec out(v.size());
  for (int i = 0; i < v.size(); ++i) out[i] = v[i].value();
  return out;
}

// Jacobian block: rows = entries of v, columns = derivative directions
// [offset, offset + cols).
inline Mat jacobian(const ADVec& v, int offset, int cols) {
  Mat out(v.size(), cols);
  for (int i = 0; i < v.size(); ++i) {
    const auto& d = v[i].derivatives();
    for (int j = 0; j < cols; ++j) {
      out(i, j) = d.size() > offset + j ? d[offset + j] : 0.0;
    }
  }
  return out;
}

// Standard symplectic matrix J_n = [[0, I], [-I, 0]] in block form, with the
// 2x2 blocks interleaved as (q1, p1, q2, p2, ...).
inline Mat canonical_omega(int dim) {
  Mat w = Mat::Zero(dim, dim);
  for (int i = 0; i + 1 < dim; i += 2) {
    w(i, i + 1) = 1.0;
    w(i + 1, i) = -1.0;
  }
  return w;
}

}  // namespace dyngeo
