#include <cmath>
#include <limits>
#include <sstream>

#include "dyngeo/errors.hpp"
#include "dyngeo/manifold.hpp"

namespace dyngeo {

namespace {

template <class T>
using VecT = Eigen::Matrix<T, Eigen::Dynamic, 1>;

// Unit-sphere stereographic embedding and its inverse, generic in the scalar.
template <class T>
Eigen::Matrix<T, 3, 1> unit_embed(const VecT<T>& u) {
  const T r2 = u[0] * u[0] + u[1] * u[1];
  const T den = T(1.0) + r2;
  Eigen::Matrix<T, 3, 1> p;
  p << T(2.0) * u[0] / den, T(2.0) * u[1] / den, (T(1.0) - r2) / den;
  return p;
}

template <class T>
VecT<T> unit_chart(const Eigen::Matrix<T, 3, 1>& p) {
  VecT<T> u(2);
  const T den = T(1.0) + p[2];
  u << p[0] / den, p[1] / den;
  return u;
}

// Rotation by pi about the axis through x: 2 <x, w> x - w.
template <class T>
VecT<T> sphere_reflect(const VecT<T>& x, const VecT<T>& w) {
  const auto px = unit_embed<T>(x);
  const auto pw = unit_embed<T>(w);
  const T dot = px[0] * pw[0] + px[1] * pw[1] + px[2] * pw[2];
  Eigen::Matrix<T, 3, 1> q;
  for (int i = 0; i < 3; ++i) q[i] = T(2.0) * dot * px[i] - pw[i];
  return unit_chart<T>(q);
}

// Complex arithmetic on (re, im) pairs, generic in the scalar.
template <class T>
struct Cx {
  T re, im;
};
template <class T>
Cx<T> mul(const Cx<T>& a, const Cx<T>& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
template <class T>
Cx<T> div(const Cx<T>& a, const Cx<T>& b) {
  const T den = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
}

// Geodesic symmetry of the Poincare disk: phi_x(-phi_x^{-1}(z)) with
// phi_a(w) = (w + a) / (1 + conj(a) w).
template <class T>
VecT<T> disk_reflect(const VecT<T>& x, const VecT<T>& z) {
  const Cx<T> a{x[0], x[1]};
  const Cx<T> abar{x[0], -x[1]};
  const Cx<T> zc{z[0], z[1]};
  const Cx<T> one{T(1.0), T(0.0)};
  const auto az = mul(abar, zc);
  const Cx<T> m = div(Cx<T>{zc.re - a.re, zc.im - a.im}, Cx<T>{one.re - az.re, one.im - az.im});
  const Cx<T> mneg{-m.re, -m.im};
  const auto am = mul(abar, mneg);
  const Cx<T> s = div(Cx<T>{mneg.re + a.re, mneg.im + a.im}, Cx<T>{one.re + am.re, one.im + am.im});
  VecT<T> out(2);
  out << s.re, s.im;
  return out;
}

class FlatReflections final : public PointFamily {
 public:
  explicit FlatReflections(int d) : d_(d) {}
  int dim() const override { return d_; }
  Vec apply(const Vec& x, const Vec& z) const override { return 2.0 * x - z; }
  ADVec apply(const ADVec& x, const ADVec& z) const override {
    ADVec out(x.size());
    for (int i = 0; i < x.size(); ++i) out[i] = AD(2.0) * x[i] - z[i];
    return out;
  }

 private:
  int d_;
};

class SphereReflections final : public PointFamily {
 public:
  int dim() const override { return 2; }
  Vec apply(const Vec& x, const Vec& z) const override { return sphere_reflect<double>(x, z); }
  ADVec apply(const ADVec& x, const ADVec& z) const override { return sphere_reflect<AD>(x, z); }
};

class DiskReflections final : public PointFamily {
 public:
  int dim() const override { return 2; }
  Vec apply(const Vec& x, const Vec& z) const override { return disk_reflect<double>(x, z); }
  ADVec apply(const ADVec& x, const ADVec& z) const override { return disk_reflect<AD>(x, z); }
};

// Levi-Civita connection of the conformal metric e^{2 phi} delta.
Christoffel conformal_gamma(const Vec& dphi) {
  const int d = static_cast<int>(dphi.size());
  Christoffel g(d);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        g(k, i, j) = (k == i ? dphi[j] : 0.0) + (k == j ? dphi[i] : 0.0) - (i == j ? dphi[k] : 0.0);
      }
  return g;
}

// Constant curvature K with metric lambda * delta:
// R^s_{mjk} = K (delta^s_j g_{mk} - delta^s_k g_{mj}).
Tensor4 constant_curvature(double k_curv, double lambda, int d) {
  Tensor4 r(d);
  for (int s = 0; s < d; ++s)
    for (int m = 0; m < d; ++m)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
          const double gmk = m == k ? lambda : 0.0;
          const double gmj = m == j ? lambda : 0.0;
          r(s, m, j, k) = k_curv * ((s == j ? gmk : 0.0) - (s == k ? gmj : 0.0));
        }
  return r;
}

Mat area_form(double density) {
  Mat w(2, 2);
  w << 0.0, density, -density, 0.0;
  return w;
}

}  // namespace

// ---- ManifoldModel --------------------------------------------------------

Vec ManifoldModel::sample(std::mt19937_64& rng, double fraction) const {
  const double r = std::isfinite(cap()) ? fraction * cap() : fraction;
  return sample_near(rng, Vec::Zero(dim()), r);
}

Vec ManifoldModel::sample_near(std::mt19937_64& rng, const Vec& c, double r) const {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Vec dir(dim());
    for (int i = 0; i < dim(); ++i) dir[i] = normal(rng);
    const double rad = r * std::pow(unit(rng), 1.0 / dim());
    const Vec p = c + rad * dir.normalized();
    if (in_domain(p)) return p;
  }
  throw DomainError("sample_near: could not draw a point inside the chart domain");
}

void ManifoldModel::require_domain(const Vec& x, const char* what) const {
  if (x.size() != dim() || !in_domain(x)) {
    std::ostringstream msg;
    msg << what << ": point (" << x.transpose() << ") outside the " << name() << " chart domain";
    throw DomainError(msg.str());
  }
}

// ---- flat -----------------------------------------------------------------

FlatModel::FlatModel(int n, Mat omega) : n_(n), omega_(std::move(omega)) {
  if (n < 1) throw InvalidArgument("FlatModel: n must be >= 1");
  if (omega_.size() == 0) omega_ = canonical_omega(2 * n);
  if (omega_.rows() != 2 * n || omega_.cols() != 2 * n) {
    throw InvalidArgument("FlatModel: omega must be 2n x 2n");
  }
  if ((omega_ + omega_.transpose()).cwiseAbs().maxCoeff() > 0.0) {
    throw InvalidArgument("FlatModel: omega must be antisymmetric");
  }
}

std::string FlatModel::name() const { return "flat-r" + std::to_string(2 * n_); }

bool FlatModel::in_domain(const Vec& x) const { return x.size() == dim() && x.allFinite(); }

FamilyPtr FlatModel::reflections() const { return std::make_shared<FlatReflections>(dim()); }

// ---- sphere ---------------------------------------------------------------

SphereModel::SphereModel(double radius, double cap) : radius_(radius), cap_(cap) {
  if (!(radius > 0.0) || !(cap > 0.0)) throw InvalidArgument("SphereModel: radius, cap > 0");
}

bool SphereModel::in_domain(const Vec& x) const {
  return x.size() == 2 && x.allFinite() && x.norm() < cap_;
}

Mat SphereModel::omega(const Vec& x) const {
  const double den = 1.0 + x.squaredNorm();
  return area_form(4.0 * radius_ * radius_ / (den * den));
}

Christoffel SphereModel::gamma(const Vec& x) const {
  return conformal_gamma(-2.0 * x / (1.0 + x.squaredNorm()));
}

std::optional<Tensor4> SphereModel::curvature_closed_form(const Vec& x) const {
  const double den = 1.0 + x.squaredNorm();
  const double lambda = 4.0 * radius_ * radius_ / (den * den);
  return constant_curvature(1.0 / (radius_ * radius_), lambda, 2);
}

FamilyPtr SphereModel::reflections() const { return std::make_shared<SphereReflections>(); }

Eigen::Vector3d SphereModel::embed(const Vec& u) const {
  return radius_ * unit_embed<double>(u);
}

Vec SphereModel::chart(const Eigen::Vector3d& p) const {
  return unit_chart<double>(Eigen::Vector3d(p / radius_));
}

// ---- hyperbolic -----------------------------------------------------------

HyperbolicModel::HyperbolicModel(double radius, double cap) : radius_(radius), cap_(cap) {
  if (!(radius > 0.0) || !(cap > 0.0) || cap >= 1.0) {
    throw InvalidArgument("HyperbolicModel: radius > 0 and 0 < cap < 1");
  }
}

bool HyperbolicModel::in_domain(const Vec& x) const {
  return x.size() == 2 && x.allFinite() && x.norm() < cap_;
}

Mat HyperbolicModel::omega(const Vec& x) const {
  const double den = 1.0 - x.squaredNorm();
  return area_form(4.0 * radius_ * radius_ / (den * den));
}

Christoffel HyperbolicModel::gamma(const Vec& x) const {
  return conformal_gamma(2.0 * x / (1.0 - x.squaredNorm()));
}

std::optional<Tensor4> HyperbolicModel::curvature_closed_form(const Vec& x) const {
  const double den = 1.0 - x.squaredNorm();
  const double lambda = 4.0 * radius_ * radius_ / (den * den);
  return constant_curvature(-1.0 / (radius_ * radius_), lambda, 2);
}

FamilyPtr HyperbolicModel::reflections() const { return std::make_shared<DiskReflections>(); }

// ---- factory --------------------------------------------------------------

ModelPtr make_model(const std::string& name, const ModelParams& params) {
  if (name == "flat-r2") return std::make_shared<FlatModel>(1);
  if (name == "flat-r4") return std::make_shared<FlatModel>(2);
  if (name == "flat-r2n") return std::make_shared<FlatModel>(params.n);
  if (name == "sphere-s2") return std::make_shared<SphereModel>(params.radius, params.cap.value_or(2.0));
  if (name == "hyperbolic-h2") {
    return std::make_shared<HyperbolicModel>(params.radius, params.cap.value_or(0.9));
  }
  throw ConfigError("unknown model '" + name + "'");
}

}  // namespace dyngeo
