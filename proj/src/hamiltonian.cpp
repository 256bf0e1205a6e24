#include "dyngeo/hamiltonian.hpp"

#include "dyngeo/errors.hpp"
#include "dyngeo/finite_diff.hpp"

namespace dyngeo {

namespace {

class Oscillator final : public Hamiltonian {
 public:
  std::string name() const override { return "flat-oscillator"; }
  double value(const Vec& x) const override { return 0.5 * x.squaredNorm(); }
  Vec gradient(const Vec& x) const override { return x; }
  Mat hessian(const Vec& x) const override { return Mat::Identity(x.size(), x.size()); }
};

class Quartic final : public Hamiltonian {
 public:
  explicit Quartic(double c) : c_(c) {}
  std::string name() const override { return "flat-quartic"; }
  double value(const Vec& x) const override {
    return 0.5 * x.squaredNorm() + c_ * std::pow(x[0], 4);
  }
  Vec gradient(const Vec& x) const override {
    Vec g = x;
    g[0] += 4.0 * c_ * std::pow(x[0], 3);
    return g;
  }
  Mat hessian(const Vec& x) const override {
    Mat h = Mat::Identity(x.size(), x.size());
    h(0, 0) += 12.0 * c_ * x[0] * x[0];
    return h;
  }

 private:
  double c_;
};

class Cubic final : public Hamiltonian {
 public:
  explicit Cubic(double c) : c_(c) {}
  std::string name() const override { return "flat-cubic"; }
  double value(const Vec& x) const override {
    return 0.5 * x.squaredNorm() + c_ * std::pow(x[0], 3);
  }
  Vec gradient(const Vec& x) const override {
    Vec g = x;
    g[0] += 3.0 * c_ * x[0] * x[0];
    return g;
  }
  Mat hessian(const Vec& x) const override {
    Mat h = Mat::Identity(x.size(), x.size());
    h(0, 0) += 6.0 * c_ * x[0];
    return h;
  }

 private:
  double c_;
};

// Height of the embedded sphere, R (1 - r^2) / (1 + r^2).
class SphereHeight final : public Hamiltonian {
 public:
  explicit SphereHeight(double r) : r_(r) {}
  std::string name() const override { return "sphere-height"; }
  double value(const Vec& u) const override {
    const double r2 = u.squaredNorm();
    return r_ * (1.0 - r2) / (1.0 + r2);
  }
  Vec gradient(const Vec& u) const override {
    const double den = 1.0 + u.squaredNorm();
    return -4.0 * r_ * u / (den * den);
  }
  Mat hessian(const Vec& u) const override {
    const double den = 1.0 + u.squaredNorm();
    return -4.0 * r_ *
           (Mat::Identity(2, 2) / (den * den) - 4.0 * u * u.transpose() / (den * den * den));
  }

 private:
  double r_;
};

// 2 R r^2 / (1 - r^2) on the disk: R (cosh(dist / R) - 1).
class HyperbolicQuadratic final : public Hamiltonian {
 public:
  explicit HyperbolicQuadratic(double r) : r_(r) {}
  std::string name() const override { return "hyperbolic-quadratic"; }
  double value(const Vec& u) const override {
    const double r2 = u.squaredNorm();
    return 2.0 * r_ * r2 / (1.0 - r2);
  }
  Vec gradient(const Vec& u) const override {
    const double den = 1.0 - u.squaredNorm();
    return 4.0 * r_ * u / (den * den);
  }
  Mat hessian(const Vec& u) const override {
    const double den = 1.0 - u.squaredNorm();
    return 4.0 * r_ *
           (Mat::Identity(2, 2) / (den * den) + 4.0 * u * u.transpose() / (den * den * den));
  }

 private:
  double r_;
};

}  // namespace

std::vector<std::string> hamiltonian_names() {
  return {"flat-oscillator", "flat-quartic", "flat-cubic", "sphere-height", "hyperbolic-quadratic"};
}

HamiltonianPtr make_hamiltonian(const std::string& name, const HamiltonianParams& params) {
  if (name == "flat-oscillator") return std::make_shared<Oscillator>();
  if (name == "flat-quartic") return std::make_shared<Quartic>(params.coefficient);
  if (name == "flat-cubic") return std::make_shared<Cubic>(params.coefficient);
  if (name == "sphere-height") return std::make_shared<SphereHeight>(params.radius);
  if (name == "hyperbolic-quadratic") return std::make_shared<HyperbolicQuadratic>(params.radius);
  throw ConfigError("unknown hamiltonian '" + name + "'");
}

HamiltonianSystem::HamiltonianSystem(ModelPtr model, HamiltonianPtr h, ode::Options opts)
    : model_(std::move(model)), h_(std::move(h)), opts_(opts) {
  if (!model_ || !h_) throw InvalidArgument("HamiltonianSystem: null model or hamiltonian");
}

Vec HamiltonianSystem::vector_field(const Vec& x) const {
  return poisson_tensor(*model_, x).transpose() * h_->gradient(x);
}

Mat HamiltonianSystem::vector_field_jacobian(const Vec& x) const {
  return fd::jacobian([this](const Vec& p) { return vector_field(p); }, x, 1e-5, true);
}

Mat HamiltonianSystem::covariant_hessian(const Vec& x) const {
  return dyngeo::covariant_hessian(model_->gamma(x), h_->gradient(x), h_->hessian(x));
}

Vec HamiltonianSystem::flow(double t, const Vec& x) const {
  model_->require_domain(x, "hamiltonian_flow");
  if (t == 0.0) return x;
  auto rhs = [this](double, const Vec& y, Vec& dy) {
    model_->require_domain(y, "hamiltonian_flow");
    dy = vector_field(y);
  };
  return ode::integrate(rhs, x, 0.0, t, opts_);
}

LinearMap HamiltonianSystem::flow_differential(double t, const Vec& x) const {
  model_->require_domain(x, "hamiltonian_flow");
  const int d = model_->dim();
  Vec state = Vec::Zero(d + d * d);
  state.head(d) = x;
  for (int i = 0; i < d; ++i) state[d + i * d + i] = 1.0;
  auto rhs = [this, d](double, const Vec& s, Vec& ds) {
    const Vec y = s.head(d);
    model_->require_domain(y, "hamiltonian_flow");
    ds.head(d) = vector_field(y);
    const Eigen::Map<const Mat> j(s.data() + d, d, d);
    Eigen::Map<Mat>(ds.data() + d, d, d) = vector_field_jacobian(y) * j;
  };
  const Vec out = t == 0.0 ? state : ode::integrate(rhs, state, 0.0, t, opts_);
  return {Eigen::Map<const Mat>(out.data() + d, d, d), x, out.head(d)};
}

}  // namespace dyngeo
