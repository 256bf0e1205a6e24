#include "dyngeo/ether.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "dyngeo/errors.hpp"
#include "dyngeo/quadrature.hpp"

namespace dyngeo {

std::string to_string(EtherStrategy s) {
  switch (s) {
    case EtherStrategy::ClosedForm: return "closed-form";
    case EtherStrategy::LineIntegral: return "line-integral";
    case EtherStrategy::Jet: return "jet";
  }
  return "unknown";
}

EtherStrategy parse_strategy(const std::string& s) {
  if (s == "closed-form") return EtherStrategy::ClosedForm;
  if (s == "line-integral") return EtherStrategy::LineIntegral;
  if (s == "jet") return EtherStrategy::Jet;
  throw ConfigError("unknown ether strategy '" + s + "'");
}

// ---- EtherField -----------------------------------------------------------

EtherField::EtherField(ModelPtr model) : model_(std::move(model)) {
  if (!model_) throw InvalidArgument("EtherField: null model");
  if (!model_->symplectic()) throw InvalidArgument("EtherField: model is not symplectic");
}

void EtherField::require_domain(const Vec& z, const char* what) const {
  model_->require_domain(z, what);
}

Mat EtherField::field(const Vec& x, const Vec& z) const {
  return (grad_z(x, z) * poisson_tensor(*model_, z)).transpose();
}

Vec EtherField::reflect(const Vec& x, const Vec& z, const ode::Options& opts) const {
  require_domain(x, "reflect");
  require_domain(z, "reflect");
  const Vec dir = x - z;
  auto rhs = [&](double tau, const Vec& s, Vec& ds) {
    require_domain(s, "reflect");
    ds = field(z + tau * dir, s) * dir;
  };
  return ode::integrate(rhs, z, 0.0, 1.0, opts);
}

// ---- flat -----------------------------------------------------------------

FlatEther::FlatEther(ModelPtr model) : EtherField(std::move(model)) {
  if (!model_->flat()) throw InvalidArgument("FlatEther: model " + model_->name() + " is not flat");
}

Vec FlatEther::eval(const Vec& x, const Vec& z) const { return 2.0 * model_->omega(x) * (z - x); }

Mat FlatEther::grad_z(const Vec& x, const Vec&) const { return 2.0 * model_->omega(x); }

Mat FlatEther::field(const Vec&, const Vec&) const { return 2.0 * Mat::Identity(dim(), dim()); }

Mat FlatEther::field_jacobian(const Vec&, const Vec&, const Vec&) const {
  return Mat::Zero(dim(), dim());
}

// ---- line integral --------------------------------------------------------

ReflectionEther::ReflectionEther(ModelPtr model, FamilyPtr reflections, int panels)
    : EtherField(std::move(model)), reflections_(std::move(reflections)) {
  if (!reflections_) throw InvalidArgument("ReflectionEther: model has no reflections");
  const auto rule = quad::composite_gauss_legendre(panels);
  nodes_ = rule.nodes;
  weights_ = rule.weights;
}

Mat ReflectionEther::field(const Vec& x, const Vec& z) const {
  return reflections_->d_dx(x, reflections_->apply(x, z));
}

Mat ReflectionEther::grad_z(const Vec& x, const Vec& z) const {
  return field(x, z).transpose() * model_->omega(z);
}

Vec ReflectionEther::eval(const Vec& x, const Vec& z) const {
  const Vec delta = z - x;
  Vec out = Vec::Zero(dim());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    out += weights_[i] * (grad_z(x, x + nodes_[i] * delta) * delta);
  }
  return out;
}

// ---- jet ------------------------------------------------------------------

Vec JetCoefficients::eval(const Vec& z) const {
  const Vec d = z - x;
  Vec out = p1 * d;
  if (order >= 2) {
    for (int k = 0; k < dim; ++k)
      for (int l = 0; l < dim; ++l)
        for (int s = 0; s < dim; ++s) out[k] += 0.5 * c2(k, l, s) * d[l] * d[s];
  }
  if (order >= 3) {
    for (int k = 0; k < dim; ++k)
      for (int j = 0; j < dim; ++j)
        for (int l = 0; l < dim; ++l)
          for (int s = 0; s < dim; ++s) out[k] += c3(k, j, l, s) * d[j] * d[l] * d[s] / 6.0;
  }
  return out;
}

Mat JetCoefficients::grad(const Vec& z) const {
  const Vec d = z - x;
  Mat out = p1;
  if (order >= 2) {
    for (int k = 0; k < dim; ++k)
      for (int m = 0; m < dim; ++m)
        for (int l = 0; l < dim; ++l) out(k, m) += c2(k, m, l) * d[l];
  }
  if (order >= 3) {
    for (int k = 0; k < dim; ++k)
      for (int m = 0; m < dim; ++m)
        for (int l = 0; l < dim; ++l)
          for (int s = 0; s < dim; ++s) out(k, m) += 0.5 * c3(k, m, l, s) * d[l] * d[s];
  }
  return out;
}

JetCoefficients jet_expand(const ManifoldModel& model, const Vec& x, int order,
                           const fd::Steps& steps) {
  if (order < 1 || order > 3) {
    throw InvalidArgument("jet_expand: order must be 1, 2 or 3 (got " + std::to_string(order) + ")");
  }
  model.require_domain(x, "jet_expand");
  const int d = model.dim();
  const Mat w = model.omega(x);
  JetCoefficients jet;
  jet.x = x;
  jet.order = order;
  jet.dim = d;
  jet.p1 = 2.0 * w;
  jet.p2.assign(d * d * d, 0.0);
  jet.p3.assign(d * d * d * d, 0.0);
  jet.covariant3.assign(d * d * d * d, 0.0);

  const Christoffel g = model.gamma(x);
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l)
      for (int s = 0; s < d; ++s) {
        double v = 0.0;
        for (int m = 0; m < d; ++m) v += 2.0 * g(m, l, s) * w(k, m);
        jet.c2(k, l, s) = v;
      }
  if (order < 3) return jet;

  const Tensor4 r = curvature_tensor(model, x, steps);
  const auto dg = gamma_derivatives(model, x, steps);
  std::vector<double> raw(d * d * d * d, 0.0);
  auto at = [d](int a, int b, int c, int e) { return ((a * d + b) * d + c) * d + e; };
  for (int j = 0; j < d; ++j)
    for (int l = 0; l < d; ++l)
      for (int s = 0; s < d; ++s)
        for (int k = 0; k < d; ++k) {
          double cov = 0.0;
          for (int m = 0; m < d; ++m) cov += 2.0 * w(s, m) * r(m, l, k, j);
          jet.covariant3[at(j, l, s, k)] = cov;
          double v = cov;
          for (int m = 0; m < d; ++m) {
            v += 2.0 * dg[j](m, l, s) * w(k, m);
            for (int p = 0; p < d; ++p) v += 2.0 * g(m, l, s) * g(p, j, m) * w(k, p);
          }
          raw[at(k, j, l, s)] = v;
        }
  for (int k = 0; k < d; ++k)
    for (int j = 0; j < d; ++j)
      for (int l = 0; l < d; ++l)
        for (int s = 0; s < d; ++s) {
          jet.c3(k, j, l, s) = (raw[at(k, j, l, s)] + raw[at(k, j, s, l)] + raw[at(k, l, j, s)] +
                                raw[at(k, l, s, j)] + raw[at(k, s, j, l)] + raw[at(k, s, l, j)]) /
                               6.0;
        }
  return jet;
}

JetEther::JetEther(ModelPtr model, int order, double radius)
    : EtherField(std::move(model)), order_(order), radius_(radius) {
  if (order < 1 || order > 3) throw InvalidArgument("JetEther: order must be 1, 2 or 3");
  if (!(radius > 0.0)) throw InvalidArgument("JetEther: radius must be positive");
}

void JetEther::check_radius(const Vec& x, const Vec& z) const {
  if ((z - x).norm() > radius_) {
    std::ostringstream msg;
    msg << "jet field evaluated at |z - x| = " << (z - x).norm() << " beyond radius " << radius_;
    throw DomainError(msg.str());
  }
}

Vec JetEther::eval(const Vec& x, const Vec& z) const {
  check_radius(x, z);
  return jet_expand(*model_, x, order_).eval(z);
}

Mat JetEther::grad_z(const Vec& x, const Vec& z) const {
  check_radius(x, z);
  return jet_expand(*model_, x, order_).grad(z);
}

EtherPtr make_ether_field(const ModelPtr& model, const EtherParams& params) {
  EtherStrategy s = params.strategy.value_or(
      model->flat() ? EtherStrategy::ClosedForm
                    : (model->reflections() ? EtherStrategy::LineIntegral : EtherStrategy::Jet));
  switch (s) {
    case EtherStrategy::ClosedForm:
      return std::make_shared<FlatEther>(model);
    case EtherStrategy::LineIntegral:
      return std::make_shared<ReflectionEther>(model, model->reflections(), params.quad_panels);
    case EtherStrategy::Jet:
      return std::make_shared<JetEther>(model, params.jet_order, params.jet_radius);
  }
  throw InvalidArgument("make_ether_field: bad strategy");
}

// ---- reconstruction and residuals -----------------------------------------

Christoffel connection_from_reflections(const PointFamily& s, const Vec& x, double h) {
  const int d = s.dim();
  Christoffel g(d);
  for (int l = 0; l < d; ++l) {
    const Vec e = Vec::Unit(d, l);
    auto central = [&](double step) -> Mat {
      return (s.d_dz(x, x + step * e) - s.d_dz(x, x - step * e)) / (2.0 * step);
    };
    const Mat dl = (4.0 * central(0.5 * h) - central(h)) / 3.0;
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) g(j, k, l) = -0.5 * dl(j, k);
  }
  return g;
}

Vec ether_from_reflections(const ManifoldModel& model, const PointFamily& s, const Vec& x,
                           const Path& path, int panels) {
  model.require_domain(x, "ether_from_reflections");
  const auto rule = quad::composite_gauss_legendre(panels);
  std::vector<double> cuts{0.0};
  for (double k : path.knots()) cuts.push_back(k);
  cuts.push_back(1.0);
  Vec out = Vec::Zero(model.dim());
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double a = cuts[p], len = cuts[p + 1] - cuts[p];
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double t = a + len * rule.nodes[i];
      const Vec zp = path.point(t);
      model.require_domain(zp, "ether_from_reflections");
      const Mat a_x = s.d_dx(x, s.apply(x, zp));
      out += len * rule.weights[i] * (a_x.transpose() * model.omega(zp) * path.velocity(t));
    }
  }
  return out;
}

double zero_curvature_residual(const EtherField& field, const Vec& x, const Vec& z, const Vec& u,
                               const Vec& v, const fd::Steps& steps) {
  const fd::VectorFn h_of_x = [&](const Vec& p) { return field.eval(p, z); };
  const Vec du = fd::directional(h_of_x, x, u, steps.first, steps.richardson);
  const Vec dv = fd::directional(h_of_x, x, v, steps.first, steps.richardson);
  const Mat g = field.grad_z(x, z);
  const Mat psi = poisson_tensor(field.model(), z);
  const double bracket = u.dot(g * psi * g.transpose() * v);
  return std::abs(v.dot(du) - u.dot(dv) + bracket);
}

BoundaryResiduals boundary_residuals(const EtherField& field, const Vec& x,
                                     const fd::Steps& steps) {
  const auto& model = field.model();
  const int d = model.dim();
  BoundaryResiduals out;
  out.value = field.eval(x, x).cwiseAbs().maxCoeff();
  const Mat g = field.grad_z(x, x);
  out.gradient = (g - 2.0 * model.omega(x)).cwiseAbs().maxCoeff();
  const Christoffel gam = model.gamma(x);
  const fd::VectorFn flat_grad = [&](const Vec& p) {
    const Mat m = field.grad_z(x, p);
    return Vec(Eigen::Map<const Vec>(m.data(), m.size()));
  };
  for (int l = 0; l < d; ++l) {
    const Vec dl = fd::directional(flat_grad, x, Vec::Unit(d, l), steps.first, steps.richardson);
    const Eigen::Map<const Mat> dg(dl.data(), d, d);  // dg(k, s) = D_l D_s H_k
    for (int k = 0; k < d; ++k)
      for (int s = 0; s < d; ++s) {
        double v = dg(k, s);
        for (int m = 0; m < d; ++m) v -= gam(m, l, s) * g(k, m);
        out.hessian = std::max(out.hessian, std::abs(v));
      }
  }
  return out;
}

double skew_symmetry_residual(const EtherField& field, const Vec& x, const Vec& z) {
  const auto refl = field.model().reflections();
  const Vec sz = refl ? refl->apply(x, z) : field.reflect(x, z);
  return (field.eval(x, sz) + field.eval(x, z)).cwiseAbs().maxCoeff();
}

}  // namespace dyngeo
