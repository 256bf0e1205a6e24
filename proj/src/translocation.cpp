#include "dyngeo/translocation.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include "dyngeo/errors.hpp"

namespace dyngeo {

TranslocatedSystem::TranslocatedSystem(EtherPtr field, HamiltonianSystem system, Vec anchor)
    : field_(std::move(field)), system_(std::move(system)), y_(std::move(anchor)) {
  if (!field_) throw InvalidArgument("TranslocatedSystem: null field");
  system_.model().require_domain(y_, "TranslocatedSystem");
}

TranslocatedSystem::Segment TranslocatedSystem::segment(double t, const Vec& z,
                                                        bool with_jacobian) const {
  const auto& model = system_.model();
  model.require_domain(z, "translocate");
  const int d = model.dim();
  const int n = with_jacobian ? 2 * d + d * d : 2 * d;
  Vec state = Vec::Zero(n);
  state.head(d) = y_;
  state.segment(d, d) = z;
  if (with_jacobian) {
    for (int i = 0; i < d; ++i) state[2 * d + i * d + i] = 1.0;
  }
  auto rhs = [&](double, const Vec& s, Vec& ds) {
    const Vec x = s.head(d);
    const Vec p = s.segment(d, d);
    model.require_domain(x, "translocate");
    model.require_domain(p, "translocate");
    const Vec xdot = system_.vector_field(x);
    ds.head(d) = xdot;
    ds.segment(d, d) = 0.5 * (field_->field(x, p) * xdot);
    if (with_jacobian) {
      const Eigen::Map<const Mat> j(s.data() + 2 * d, d, d);
      Eigen::Map<Mat>(ds.data() + 2 * d, d, d) = 0.5 * field_->field_jacobian(x, p, xdot) * j;
    }
  };
  const Vec out = t == 0.0 ? state : ode::integrate(rhs, state, 0.0, t, system_.options());
  Segment seg;
  seg.x = out.head(d);
  seg.xdot = system_.vector_field(seg.x);
  seg.image = out.segment(d, d);
  if (with_jacobian) seg.jacobian = Eigen::Map<const Mat>(out.data() + 2 * d, d, d);
  return seg;
}

double TranslocatedSystem::value(double t, const Vec& z) const {
  const auto seg = segment(t, z, false);
  const auto& h = system_.hamiltonian();
  return h.value(seg.image) - 0.5 * seg.xdot.dot(field_->eval(seg.x, seg.image)) - h.value(y_);
}

Vec TranslocatedSystem::gradient(double t, const Vec& z) const {
  const auto seg = segment(t, z, true);
  const Vec inner = system_.hamiltonian().gradient(seg.image) -
                    0.5 * field_->grad_z(seg.x, seg.image).transpose() * seg.xdot;
  return seg.jacobian.transpose() * inner;
}

Vec TranslocatedSystem::flow(double t, const Vec& x) const {
  const auto& model = system_.model();
  model.require_domain(x, "translocated_flow");
  if (t == 0.0) return x;
  auto rhs = [&](double tau, const Vec& z, Vec& dz) {
    model.require_domain(z, "translocated_flow");
    dz = poisson_tensor(model, z).transpose() * gradient(tau, z);
  };
  return ode::integrate(rhs, x, 0.0, t, system_.options());
}

double factorization_residual(const TranslocatedSystem& sys, double t, const Vec& x) {
  const Vec direct = sys.system().flow(t, x);
  const Vec z = sys.flow(t, x);
  return (direct - sys.segment(t, z).image).norm();
}

namespace {

// Trajectory from y with parallel transport V, the translocated linearisation
// W and the flow variation J, all integrated together.
struct Transport {
  Vec x;
  Mat v, w, j;
};

Transport transport(const TranslocatedSystem& sys, double t) {
  const auto& system = sys.system();
  const auto& model = system.model();
  const int d = model.dim();
  const int dd = d * d;
  const Vec y = sys.anchor();
  const Mat psi_y = poisson_tensor(model, y);
  Vec state = Vec::Zero(d + 3 * dd);
  state.head(d) = y;
  for (int b = 0; b < 3; ++b)
    for (int i = 0; i < d; ++i) state[d + b * dd + i * d + i] = 1.0;
  auto rhs = [&](double, const Vec& s, Vec& ds) {
    const Vec x = s.head(d);
    model.require_domain(x, "first_variation");
    const Vec xdot = system.vector_field(x);
    ds.head(d) = xdot;
    const Eigen::Map<const Mat> v(s.data() + d, d, d);
    const Eigen::Map<const Mat> w(s.data() + d + dd, d, d);
    const Eigen::Map<const Mat> j(s.data() + d + 2 * dd, d, d);
    Eigen::Map<Mat>(ds.data() + d, d, d) = -model.gamma(x).contract(xdot) * v;
    const Mat m = -psi_y * v.transpose() * system.covariant_hessian(x) * v;
    Eigen::Map<Mat>(ds.data() + d + dd, d, d) = m * w;
    Eigen::Map<Mat>(ds.data() + d + 2 * dd, d, d) = system.vector_field_jacobian(x) * j;
  };
  const Vec out = t == 0.0 ? state : ode::integrate(rhs, state, 0.0, t, system.options());
  Transport tr;
  tr.x = out.head(d);
  tr.v = Eigen::Map<const Mat>(out.data() + d, d, d);
  tr.w = Eigen::Map<const Mat>(out.data() + d + dd, d, d);
  tr.j = Eigen::Map<const Mat>(out.data() + d + 2 * dd, d, d);
  return tr;
}

}  // namespace

HessianReport hessian_check(const TranslocatedSystem& sys, double t, double h) {
  const Vec y = sys.anchor();
  Mat fdh = fd::jacobian([&](const Vec& z) { return sys.gradient(t, z); }, y, h, true);
  fdh = 0.5 * (fdh + fdh.transpose()).eval();
  const auto tr = transport(sys, t);
  HessianReport out;
  out.fd_hessian = fdh;
  out.predicted = tr.v.transpose() * sys.system().covariant_hessian(tr.x) * tr.v;
  out.residual = (out.fd_hessian - out.predicted).cwiseAbs().maxCoeff();
  return out;
}

MonodromyFactorization first_variation(const TranslocatedSystem& sys, double t) {
  const auto tr = transport(sys, t);
  MonodromyFactorization out;
  out.v = tr.v;
  out.w = tr.w;
  out.dx = tr.j;
  out.residual = (tr.j - tr.v * tr.w).cwiseAbs().maxCoeff();
  return out;
}

double covariant_quadratic_residual(const HamiltonianSystem& system, const Vec& y, double t,
                                    int samples) {
  const auto& model = system.model();
  std::vector<double> times;
  for (int i = 0; i <= samples; ++i) times.push_back(t * i / samples);
  const auto points = t == 0.0 ? std::vector<Vec>{y}
                               : ode::integrate_to(
                                     [&](double, const Vec& x, Vec& dx) { dx = system.vector_field(x); },
                                     y, 0.0, times, system.options());
  double worst = 0.0;
  const double h = 1e-5;
  for (const auto& p : points) {
    const Vec xh = system.vector_field(p);
    auto central = [&](double step) -> Mat {
      return (system.covariant_hessian(p + step * xh) - system.covariant_hessian(p - step * xh)) /
             (2.0 * step);
    };
    const Mat ds = (4.0 * central(0.5 * h) - central(h)) / 3.0;
    const Mat s = system.covariant_hessian(p);
    const Christoffel g = model.gamma(p);
    const Mat gx = g.contract(xh);  // gx(m, j) = Gamma^m_{ji} X^i
    Mat cov = ds - gx.transpose() * s - s * gx;
    worst = std::max(worst, cov.cwiseAbs().maxCoeff());
  }
  return worst;
}

double closed_form_monodromy_residual(const TranslocatedSystem& sys, double t,
                                      const MonodromyFactorization& f) {
  const auto& system = sys.system();
  const Vec y = sys.anchor();
  const Mat gen = -t * poisson_tensor(system.model(), y) * system.covariant_hessian(y);
  const Mat predicted = f.v * gen.exp();
  return (f.dx - predicted).cwiseAbs().maxCoeff();
}

}  // namespace dyngeo
