#include "dyngeo/affine.hpp"

#include <complex>
#include <unsupported/Eigen/MatrixFunctions>

#include "dyngeo/errors.hpp"
#include "dyngeo/quadrature.hpp"

namespace dyngeo {

// ---- inversive structures -------------------------------------------------

Vec InversiveStructure::inverse(const Vec& x, const Vec& z) const {
  Vec w = z;
  for (int it = 0; it < 60; ++it) {
    const Vec r = apply(x, w) - z;
    if (r.norm() <= 1e-14 * std::max(1.0, z.norm())) return w;
    w -= d_dz(x, w).partialPivLu().solve(r);
  }
  const Vec r = apply(x, w) - z;
  if (r.norm() <= 1e-11 * std::max(1.0, z.norm())) return w;
  throw ConvergenceError("inverse: Newton did not converge");
}

Mat InversiveStructure::d_dx(const Vec& x, const Vec& z) const {
  return fd::jacobian([&](const Vec& p) { return apply(p, z); }, x, 1e-4, true);
}

Mat InversiveStructure::d_dz(const Vec& x, const Vec& z) const {
  return fd::jacobian([&](const Vec& p) { return apply(x, p); }, z, 1e-4, true);
}

FamilyInversions::FamilyInversions(FamilyPtr family, bool involutive)
    : family_(std::move(family)), involutive_(involutive) {
  if (!family_) throw InvalidArgument("FamilyInversions: null family");
}

Vec FamilyInversions::inverse(const Vec& x, const Vec& z) const {
  return involutive_ ? family_->apply(x, z) : InversiveStructure::inverse(x, z);
}

LinearInversions::LinearInversions(Mat m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) {
    throw InvalidArgument("LinearInversions: M must be square");
  }
  if (cartan_spectrum_margin(Mat::Identity(dim(), dim()) - m_) < 1e-12) {
    throw InvalidArgument("LinearInversions: M has eigenvalue 0 or 1");
  }
  m_inv_ = m_.inverse();
}

bool LinearInversions::involutive() const {
  return (m_ * m_ - Mat::Identity(dim(), dim())).cwiseAbs().maxCoeff() < 1e-14;
}

Mat default_inversion_matrix(int dim) {
  if (dim < 2 || dim % 2 != 0) throw InvalidArgument("default_inversion_matrix: even dim >= 2");
  Mat m = Mat::Zero(dim, dim);
  for (int i = 0; i < dim; i += 2) {
    m(i, i + 1) = -1.0;
    m(i + 1, i) = 1.0;
  }
  return m;
}

Vec inversions_from_field(const InternalVectorField& field, const Vec& x, const Vec& z,
                          const ode::Options& opts) {
  field.require_domain(x, "inversions_from_field");
  field.require_domain(z, "inversions_from_field");
  const Vec dx = x - z;
  if (dx.norm() == 0.0) return z;
  auto rhs = [&](double tau, const Vec& s, Vec& ds) {
    field.require_domain(s, "inversions_from_field");
    ds = field.field(z + tau * dx, s) * dx;
  };
  return ode::integrate(rhs, z, 0.0, 1.0, opts);
}

namespace {

ode::Options tight(ode::Options o) {
  o.abs_tol = std::min(o.abs_tol, 1e-13);
  o.rel_tol = std::min(o.rel_tol, 1e-13);
  return o;
}

}  // namespace

FieldInversions::FieldInversions(FieldPtr field, ode::Options opts)
    : field_(std::move(field)), opts_(tight(opts)) {
  if (!field_) throw InvalidArgument("FieldInversions: null field");
}

Vec FieldInversions::apply(const Vec& x, const Vec& z) const {
  return inversions_from_field(*field_, x, z, opts_);
}

// ---- fields ---------------------------------------------------------------

InversionField::InversionField(InversivePtr s, ModelPtr model)
    : s_(std::move(s)), model_(std::move(model)) {
  if (!s_) throw InvalidArgument("InversionField: null inversions");
}

Mat InversionField::field(const Vec& x, const Vec& z) const {
  return s_->d_dx(x, s_->inverse(x, z));
}

void InversionField::require_domain(const Vec& z, const char* what) const {
  if (model_) model_->require_domain(z, what);
}

ConjugateField::ConjugateField(FieldPtr plus, InversivePtr s_plus)
    : plus_(std::move(plus)), s_plus_(std::move(s_plus)) {
  if (!plus_ || !s_plus_) throw InvalidArgument("ConjugateField: null argument");
}

Mat ConjugateField::field(const Vec& x, const Vec& z) const {
  const Mat dz = s_plus_->d_dz(x, z);
  Eigen::FullPivLU<Mat> lu(dz);
  if (!lu.isInvertible()) throw SingularFormError("ConjugateField: singular D s+");
  return -lu.solve(plus_->field(x, s_plus_->apply(x, z)));
}

PathMap internal_translation(FieldPtr field, Path path, const ode::Options& opts) {
  return ether_translation(std::move(field), std::move(path), opts);
}

// ---- connection and Cartan field ------------------------------------------

Christoffel inversion_connection(const InversiveStructure& s, const Vec& x, double h) {
  const int d = s.dim();
  std::vector<Mat> s2(d);  // s2[r](l, m) = d^2 s^l / dz^m dx^r at z = x
  for (int r = 0; r < d; ++r) {
    const Vec e = Vec::Unit(d, r);
    auto central = [&](double step) -> Mat {
      return (s.d_dz(x + step * e, x) - s.d_dz(x - step * e, x)) / (2.0 * step);
    };
    s2[r] = (4.0 * central(0.5 * h) - central(h)) / 3.0;
  }
  const Mat dz_inv = s.d_dz(x, x).inverse();
  const Mat dx_inv = s.d_dx(x, x).inverse();
  Christoffel g(d);
  for (int l = 0; l < d; ++l)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        double v = 0.0;
        for (int m = 0; m < d; ++m)
          for (int r = 0; r < d; ++r) v += s2[r](l, m) * dz_inv(m, k) * dx_inv(r, j);
        g(l, j, k) = -v;
      }
  return g;
}

Mat cartan_field(const InversiveStructure& s, const Vec& x) { return s.d_dx(x, x); }

double cartan_spectrum_margin(const Mat& a) {
  const Eigen::ComplexEigenSolver<Mat> es(a);
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& lam : es.eigenvalues()) {
    margin = std::min({margin, std::abs(lam), std::abs(lam - 1.0)});
  }
  return margin;
}

// ---- residuals ------------------------------------------------------------

double field_zero_curvature_residual(const InternalVectorField& field, const Vec& x, const Vec& z,
                                     const Vec& u, const Vec& v, const fd::Steps& steps) {
  const fd::VectorFn au = [&](const Vec& p) -> Vec { return field.field(p, z) * u; };
  const fd::VectorFn av = [&](const Vec& p) -> Vec { return field.field(p, z) * v; };
  const Vec dv_au = fd::directional(au, x, v, steps.first, steps.richardson);
  const Vec du_av = fd::directional(av, x, u, steps.first, steps.richardson);
  const Mat a = field.field(x, z);
  const Vec xu = a * u, xv = a * v;
  const Vec bracket = field.field_jacobian(x, z, v) * xu - field.field_jacobian(x, z, u) * xv;
  return (du_av - dv_au + bracket).norm();
}

double structural_equation_residual(const InternalVectorField& field,
                                    const std::function<Christoffel(const Vec&)>& connection,
                                    const Vec& x, const Vec& u, const Vec& v,
                                    const fd::Steps& steps) {
  const int d = field.dim();
  const fd::VectorFn cartan = [&](const Vec& p) -> Vec {
    const Mat a = field.cartan(p);
    return Eigen::Map<const Vec>(a.data(), a.size());
  };
  std::vector<Mat> da(d);  // da[k] = D_k a
  for (int k = 0; k < d; ++k) {
    const Vec col = fd::directional(cartan, x, Vec::Unit(d, k), steps.first, steps.richardson);
    da[k] = Eigen::Map<const Mat>(col.data(), d, d);
  }
  const Mat a = field.cartan(x);
  const Christoffel g = connection(x);
  const Christoffel t = g.torsion();
  Vec r = Vec::Zero(d);
  for (int s = 0; s < d; ++s)
    for (int k = 0; k < d; ++k)
      for (int j = 0; j < d; ++j) {
        double nk = da[k](s, j), nj = da[j](s, k);
        for (int l = 0; l < d; ++l) nk += g(s, k, l) * a(l, j), nj += g(s, j, l) * a(l, k);
        r[s] += u[k] * v[j] * (nk - nj);
      }
  const Vec au = a * u, av = a * v;
  for (int k = 0; k < d; ++k)
    for (int s = 0; s < d; ++s)
      for (int l = 0; l < d; ++l) r[k] += au[s] * t(k, s, l) * av[l];
  return r.norm();
}

double adjoint_boundary_residual(const InternalVectorField& field, const Christoffel& gamma,
                                 const Vec& x, const fd::Steps& steps) {
  const int d = field.dim();
  const fd::VectorFn flat = [&](const Vec& p) -> Vec {
    const Mat m = field.field(x, p);
    return Eigen::Map<const Vec>(m.data(), m.size());
  };
  const Mat a = field.field(x, x);
  double worst = 0.0;
  for (int k = 0; k < d; ++k) {
    const Vec col = fd::directional(flat, x, Vec::Unit(d, k), steps.first, steps.richardson);
    const Eigen::Map<const Mat> dk(col.data(), d, d);
    for (int s = 0; s < d; ++s)
      for (int j = 0; j < d; ++j) {
        double v = dk(s, j);
        for (int l = 0; l < d; ++l) v += gamma(s, k, l) * a(l, j);
        worst = std::max(worst, std::abs(v));
      }
  }
  return worst;
}

double involution_skew_residual(const InternalVectorField& field, const InversiveStructure& s,
                                const Vec& x, const Vec& z) {
  const Mat lhs = field.field(x, s.apply(x, z)) + s.d_dz(x, z) * field.field(x, z);
  return lhs.cwiseAbs().maxCoeff();
}

double internal_geodesic_residual(const InternalVectorField& plus,
                                  const InternalVectorField& minus, const InversiveStructure& s_plus,
                                  const Vec& x, const Vec& v, const ode::Options& opts) {
  const Vec e_minus = ether_exponential(minus, x, v, 1.0, opts);
  const Vec e_plus = ether_exponential(plus, x, -v, 1.0, opts);
  return (s_plus.apply(x, e_minus) - e_plus).norm();
}

Vec inversive_hamiltonian(const ManifoldModel& model, const InversiveStructure& s, const Vec& x,
                          const Vec& z, int panels) {
  model.require_domain(x, "inversive_hamiltonian");
  model.require_domain(z, "inversive_hamiltonian");
  const auto rule = quad::composite_gauss_legendre(panels);
  const Vec dz = z - x;
  Vec out = Vec::Zero(model.dim());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const Vec p = x + rule.nodes[i] * dz;
    const Mat a = s.d_dx(x, s.inverse(x, p));
    out += rule.weights[i] * (a.transpose() * model.omega(p) * dz);
  }
  return out;
}

SymplecticInversiveReport symplectic_inversive_checks(const ManifoldModel& model,
                                                      const InversivePtr& s_plus,
                                                      const InversivePtr& s_minus, const Vec& x,
                                                      const Vec& z, const fd::Steps& steps) {
  const int d = model.dim();
  SymplecticInversiveReport out;
  for (const auto& s : {s_plus, s_minus}) {
    out.omega_parallel = std::max(
        out.omega_parallel,
        omega_covariant_residual(
            model, x, [&](const Vec& p) { return inversion_connection(*s, p); }, steps));
  }

  const Mat w = model.omega(x);
  const Christoffel gam = inversion_connection(*s_plus, x);
  const Christoffel tor = gam.torsion();
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k)
      for (int l = 0; l < d; ++l) {
        double c = 0.0;
        for (int s = 0; s < d; ++s) {
          c += w(j, s) * tor(s, k, l) + w(k, s) * tor(s, l, j) + w(l, s) * tor(s, j, k);
        }
        out.cyclic_torsion = std::max(out.cyclic_torsion, std::abs(c));
      }

  const auto& sp = *s_plus;
  out.diagonal_value = inversive_hamiltonian(model, sp, x, x).cwiseAbs().maxCoeff();
  const Mat g_fd = fd::jacobian(
      [&](const Vec& p) { return inversive_hamiltonian(model, sp, x, p); }, z, steps.first,
      steps.richardson);
  const Mat a_z = sp.d_dx(x, sp.inverse(x, z));
  out.hamiltonian_field = (g_fd - a_z.transpose() * model.omega(z)).cwiseAbs().maxCoeff();

  out.inversion_relation = (inversive_hamiltonian(model, sp, x, sp.apply(x, z)) +
                            inversive_hamiltonian(model, *s_minus, x, z))
                               .norm();

  // grad(k, m) = D_m H_k = (A^T omega)(k, m); second derivatives by differencing it.
  auto grad = [&](const Vec& p) -> Mat {
    return sp.d_dx(x, sp.inverse(x, p)).transpose() * model.omega(p);
  };
  const Mat g0 = grad(x);
  const Mat psi = poisson_tensor(model, x);
  for (int l = 0; l < d; ++l) {
    const fd::VectorFn flat = [&](const Vec& p) -> Vec {
      const Mat m = grad(p);
      return Eigen::Map<const Vec>(m.data(), m.size());
    };
    const Vec col = fd::directional(flat, x, Vec::Unit(d, l), steps.first, steps.richardson);
    const Eigen::Map<const Mat> dl(col.data(), d, d);  // dl(k, m) = D_l D_m H_k
    for (int m = 0; m < d; ++m)
      for (int k = 0; k < d; ++k) {
        double lhs = dl(k, m);
        for (int p = 0; p < d; ++p) lhs -= gam(p, m, l) * g0(k, p);
        double rhs = 0.0;
        for (int s = 0; s < d; ++s)
          for (int r = 0; r < d; ++r)
            for (int j = 0; j < d; ++j) rhs += w(m, s) * tor(s, l, r) * psi(r, j) * g0(k, j);
        out.second_derivative = std::max(out.second_derivative, std::abs(lhs - rhs));
      }
  }
  return out;
}

// ---- vector fields --------------------------------------------------------

namespace {

class LinearVectorField final : public VectorField {
 public:
  explicit LinearVectorField(Mat l) : l_(std::move(l)) {}
  std::string name() const override { return "linear"; }
  Vec value(const Vec& x) const override { return l_ * x; }
  Mat jacobian(const Vec&) const override { return l_; }

 private:
  Mat l_;
};

class RotationVectorField final : public VectorField {
 public:
  std::string name() const override { return "rotation"; }
  Vec value(const Vec& x) const override {
    Vec out = Vec::Zero(x.size());
    out[0] = -x[1];
    out[1] = x[0];
    return out;
  }
  Mat jacobian(const Vec& x) const override {
    Mat j = Mat::Zero(x.size(), x.size());
    j(0, 1) = -1.0;
    j(1, 0) = 1.0;
    return j;
  }
};

}  // namespace

VectorFieldPtr make_vector_field(const std::string& name, const Mat& l) {
  if (name == "linear") {
    if (l.rows() == 0 || l.rows() != l.cols()) {
      throw InvalidArgument("make_vector_field: linear needs a square matrix");
    }
    return std::make_shared<LinearVectorField>(l);
  }
  if (name == "rotation") return std::make_shared<RotationVectorField>();
  throw ConfigError("unknown vector field '" + name + "'");
}

Mat covariant_jacobian(const ManifoldModel& model, const VectorField& u, const Vec& x) {
  const int d = model.dim();
  const Christoffel g = model.gamma(x);
  const Vec ux = u.value(x);
  Mat out = u.jacobian(x);
  for (int k = 0; k < d; ++k)
    for (int j = 0; j < d; ++j)
      for (int s = 0; s < d; ++s) out(k, j) += g(k, s, j) * ux[s];
  return out;
}

// ---- affine translocation -------------------------------------------------

AffineTranslocation::AffineTranslocation(ModelPtr model, FieldPtr fundamental, VectorFieldPtr u,
                                         Vec anchor, ode::Options opts)
    : model_(std::move(model)),
      field_(std::move(fundamental)),
      u_(std::move(u)),
      y_(std::move(anchor)),
      opts_(opts) {
  if (!model_ || !field_ || !u_) throw InvalidArgument("AffineTranslocation: null argument");
  model_->require_domain(y_, "AffineTranslocation");
}

Vec AffineTranslocation::flow(double t, const Vec& x) const {
  model_->require_domain(x, "affine_flow");
  if (t == 0.0) return x;
  auto rhs = [&](double, const Vec& p, Vec& dp) {
    model_->require_domain(p, "affine_flow");
    dp = u_->value(p);
  };
  return ode::integrate(rhs, x, 0.0, t, opts_);
}

AffineTranslocation::Segment AffineTranslocation::segment(double t, const Vec& z) const {
  model_->require_domain(z, "affine_translocate");
  const int d = model_->dim();
  Vec state = Vec::Zero(2 * d + d * d);
  state.head(d) = y_;
  state.segment(d, d) = z;
  for (int i = 0; i < d; ++i) state[2 * d + i * d + i] = 1.0;
  auto rhs = [&](double, const Vec& s, Vec& ds) {
    const Vec x = s.head(d);
    const Vec p = s.segment(d, d);
    model_->require_domain(x, "affine_translocate");
    model_->require_domain(p, "affine_translocate");
    const Vec xdot = u_->value(x);
    ds.head(d) = xdot;
    ds.segment(d, d) = 0.5 * (field_->field(x, p) * xdot);
    const Eigen::Map<const Mat> j(s.data() + 2 * d, d, d);
    Eigen::Map<Mat>(ds.data() + 2 * d, d, d) = 0.5 * field_->field_jacobian(x, p, xdot) * j;
  };
  const Vec out = t == 0.0 ? state : ode::integrate(rhs, state, 0.0, t, opts_);
  Segment seg;
  seg.x = out.head(d);
  seg.xdot = u_->value(seg.x);
  seg.image = out.segment(d, d);
  seg.jacobian = Eigen::Map<const Mat>(out.data() + 2 * d, d, d);
  return seg;
}

Vec AffineTranslocation::translocated_field(double t, const Vec& z) const {
  const auto seg = segment(t, z);
  const Vec w = u_->value(seg.image) - 0.5 * (field_->field(seg.x, seg.image) * seg.xdot);
  return seg.jacobian.partialPivLu().solve(w);
}

Vec AffineTranslocation::translocated_flow(double t, const Vec& x) const {
  model_->require_domain(x, "affine_translocated_flow");
  if (t == 0.0) return x;
  auto rhs = [&](double tau, const Vec& z, Vec& dz) { dz = translocated_field(tau, z); };
  return ode::integrate(rhs, x, 0.0, t, opts_);
}

AffineTranslocationReport affine_translocation_checks(const AffineTranslocation& tr, double t,
                                                      const Vec& x, int samples) {
  const auto& model = tr.model();
  const auto& u = tr.u();
  const int d = model.dim();
  const int dd = d * d;
  const Vec y = tr.anchor();
  AffineTranslocationReport out;

  const Vec z = tr.translocated_flow(t, x);
  out.factorization = (tr.flow(t, x) - tr.segment(t, z).image).norm();
  out.equilibrium = tr.translocated_field(t, y).norm();

  // Trajectory from y with parallel transport V and flow variation J.
  Vec state = Vec::Zero(d + 2 * dd);
  state.head(d) = y;
  for (int b = 0; b < 2; ++b)
    for (int i = 0; i < d; ++i) state[d + b * dd + i * d + i] = 1.0;
  auto rhs = [&](double, const Vec& s, Vec& ds) {
    const Vec p = s.head(d);
    model.require_domain(p, "affine_translocation_checks");
    const Vec xdot = u.value(p);
    ds.head(d) = xdot;
    const Eigen::Map<const Mat> v(s.data() + d, d, d);
    const Eigen::Map<const Mat> j(s.data() + d + dd, d, d);
    Eigen::Map<Mat>(ds.data() + d, d, d) = -model.gamma(p).contract(xdot) * v;
    Eigen::Map<Mat>(ds.data() + d + dd, d, d) = u.jacobian(p) * j;
  };
  const Vec end = t == 0.0 ? state : ode::integrate(rhs, state, 0.0, t, tr.options());
  const Vec xt = end.head(d);
  const Mat v = Eigen::Map<const Mat>(end.data() + d, d, d);
  const Mat j = Eigen::Map<const Mat>(end.data() + d + dd, d, d);

  const Mat m = v.inverse() * covariant_jacobian(model, u, xt) * v;
  const Mat dv = fd::jacobian([&](const Vec& p) { return tr.translocated_field(t, p); }, y, 1e-4,
                              true);
  out.linearisation = (dv - m).cwiseAbs().maxCoeff();

  // nabla_u (nabla u) along the trajectory.
  std::vector<double> times;
  for (int i = 0; i <= samples; ++i) times.push_back(t * i / samples);
  auto pos = [&](double, const Vec& p, Vec& dp) { dp = u.value(p); };
  const auto points = t == 0.0 ? std::vector<Vec>{y} : ode::integrate_to(pos, y, 0.0, times, tr.options());
  for (const Vec& p : points) {
    const Vec up = u.value(p);
    const fd::VectorFn flat = [&](const Vec& q) -> Vec {
      const Mat c = covariant_jacobian(model, u, q);
      return Eigen::Map<const Vec>(c.data(), c.size());
    };
    const Vec dcol = fd::directional(flat, p, up, 1e-5, true);
    Mat nab = Eigen::Map<const Mat>(dcol.data(), d, d);
    const Mat c = covariant_jacobian(model, u, p);
    const Mat gu = model.gamma(p).contract(up);  // gu(k, s) = Gamma^k_{si} u^i
    nab += gu * c - c * gu;
    out.consistency = std::max(out.consistency, nab.cwiseAbs().maxCoeff());
  }

  const Mat gen = covariant_jacobian(model, u, y);
  out.closed_form = (j - v * (t * gen).exp()).cwiseAbs().maxCoeff();
  return out;
}

}  // namespace dyngeo
