#pragma once

#include <vector>

#include "dyngeo/types.hpp"

namespace dyngeo {

// Christoffel symbols Gamma^k_{ij}, stored as gamma(k, i, j). The last lower
// index is the differentiation direction: (nabla_j u)^k = d_j u^k + Gamma^k_{sj} u^s.
class Christoffel {
 public:
  Christoffel() = default;
  explicit Christoffel(int dim) : d_(dim), data_(dim * dim * dim, 0.0) {}

  int dim() const { return d_; }
  double& operator()(int k, int i, int j) { return data_[(k * d_ + i) * d_ + j]; }
  double operator()(int k, int i, int j) const { return data_[(k * d_ + i) * d_ + j]; }

  // Matrix (Gamma_v)^k_s = Gamma^k_{sj} v^j, the connection contracted with a direction.
  Mat contract(const Vec& v) const {
    Mat out = Mat::Zero(d_, d_);
    for (int k = 0; k < d_; ++k)
      for (int s = 0; s < d_; ++s)
        for (int j = 0; j < d_; ++j) out(k, s) += (*this)(k, s, j) * v[j];
    return out;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  Christoffel operator-(const Christoffel& o) const {
    Christoffel r(d_);
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] - o.data_[i];
    return r;
  }
  Christoffel operator+(const Christoffel& o) const {
    Christoffel r(d_);
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] + o.data_[i];
    return r;
  }
  Christoffel operator*(double s) const {
    Christoffel r(d_);
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] * s;
    return r;
  }

  // Torsion T^k_{sl} = Gamma^k_{sl} - Gamma^k_{ls}.
  Christoffel torsion() const {
    Christoffel t(d_);
    for (int k = 0; k < d_; ++k)
      for (int s = 0; s < d_; ++s)
        for (int l = 0; l < d_; ++l) t(k, s, l) = (*this)(k, s, l) - (*this)(k, l, s);
    return t;
  }

 private:
  int d_ = 0;
  std::vector<double> data_;
};

// Rank-4 array, used for the curvature R^s_{mjk} stored as r(s, m, j, k) with
// [nabla_j, nabla_k] u^s = R^s_{mjk} u^m.
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(int dim) : d_(dim), data_(dim * dim * dim * dim, 0.0) {}

  int dim() const { return d_; }
  double& operator()(int a, int b, int c, int e) { return data_[((a * d_ + b) * d_ + c) * d_ + e]; }
  double operator()(int a, int b, int c, int e) const {
    return data_[((a * d_ + b) * d_ + c) * d_ + e];
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }
  Tensor4 operator-(const Tensor4& o) const {
    Tensor4 r(d_);
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] - o.data_[i];
    return r;
  }

  // The matrix (R_{jk})^s_m = R^s_{mjk}.
  Mat matrix(int j, int k) const {
    Mat out(d_, d_);
    for (int s = 0; s < d_; ++s)
      for (int m = 0; m < d_; ++m) out(s, m) = (*this)(s, m, j, k);
    return out;
  }

 private:
  int d_ = 0;
  std::vector<double> data_;
};

}  // namespace dyngeo
