#include "dyngeo/path_map.hpp"

#include <exception>
#include <sstream>

#include "dyngeo/errors.hpp"

namespace dyngeo {

PathMap::PathMap(FieldPtr field, Path path, double factor, ode::Options opts)
    : field_(std::move(field)), path_(std::move(path)), factor_(factor), opts_(opts) {
  if (!field_) throw InvalidArgument("PathMap: null field");
  if (path_.dim() != field_->dim()) throw InvalidArgument("PathMap: path and field dimensions differ");
}

Vec PathMap::flow(const Vec& z, double t0, double t1) const {
  field_->require_domain(z, "PathMap");
  auto rhs = [this](double t, const Vec& y, Vec& dy) {
    field_->require_domain(y, "PathMap");
    dy = factor_ * (field_->field(path_.point(t), y) * path_.velocity(t));
  };
  return ode::integrate(rhs, z, t0, t1, opts_, path_.knots());
}

Vec PathMap::evaluate(const Vec& z) const { return flow(z, 0.0, 1.0); }

Vec PathMap::inverse(const Vec& z) const { return flow(z, 1.0, 0.0); }

LinearMap PathMap::differential(const Vec& z) const {
  field_->require_domain(z, "PathMap::differential");
  const int d = field_->dim();
  Vec state = Vec::Zero(d + d * d);
  state.head(d) = z;
  for (int i = 0; i < d; ++i) state[d + i * d + i] = 1.0;
  auto rhs = [this, d](double t, const Vec& s, Vec& ds) {
    const Vec y = s.head(d);
    field_->require_domain(y, "PathMap::differential");
    const Vec p = path_.point(t);
    const Vec v = path_.velocity(t);
    ds.head(d) = factor_ * (field_->field(p, y) * v);
    const Eigen::Map<const Mat> j(s.data() + d, d, d);
    Eigen::Map<Mat>(ds.data() + d, d, d) = factor_ * field_->field_jacobian(p, y, v) * j;
  };
  const Vec out = ode::integrate(rhs, state, 0.0, 1.0, opts_, path_.knots());
  return {Eigen::Map<const Mat>(out.data() + d, d, d), z, out.head(d)};
}

std::vector<Vec> PathMap::evaluate_batch_serial(const std::vector<Vec>& zs) const {
  std::vector<Vec> out;
  out.reserve(zs.size());
  for (const auto& z : zs) out.push_back(evaluate(z));
  return out;
}

std::vector<Vec> PathMap::evaluate_batch(const std::vector<Vec>& zs) const {
  const long n = static_cast<long>(zs.size());
  std::vector<Vec> out(zs.size());
  std::vector<std::exception_ptr> errors(zs.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      out[i] = evaluate(zs[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

PathMap ether_translation(FieldPtr field, Path path, const ode::Options& opts) {
  return PathMap(std::move(field), std::move(path), 1.0, opts);
}

PathMap path_symplectomorphism(FieldPtr field, Path path, const ode::Options& opts) {
  return PathMap(std::move(field), std::move(path), 0.5, opts);
}

Vec ether_exponential(const InternalVectorField& field, const Vec& x, const Vec& v, double t,
                      const ode::Options& opts) {
  field.require_domain(x, "ether_exponential");
  if (t == 0.0) return x;
  auto rhs = [&](double, const Vec& e, Vec& de) {
    field.require_domain(e, "ether_exponential");
    de = 0.5 * (field.field(x, e) * v);
  };
  return ode::integrate(rhs, x, 0.0, t, opts);
}

PathMap groupoid_compose(const PathMap& m2, const PathMap& m1) {
  const double gap = (m1.path().end() - m2.path().start()).norm();
  if (gap > 1e-12) {
    std::ostringstream msg;
    msg << "groupoid_compose: first path ends " << gap << " away from the start of the second";
    throw InvalidArgument(msg.str());
  }
  if (m1.field() != m2.field() || m1.factor() != m2.factor()) {
    throw InvalidArgument("groupoid_compose: maps built from different fields or factors");
  }
  return PathMap(m1.field(), Path::concat(m1.path(), m2.path()), m1.factor(), m1.options());
}

Vec reflect_point(const EtherField& field, const Vec& x, const Vec& z) {
  const auto refl = field.model().reflections();
  return refl ? refl->apply(x, z) : field.reflect(x, z);
}

double reflection_commutation_residual(const EtherField& field, const PathMap& sigma, const Vec& z) {
  const Vec x = sigma.path().start();
  const Vec y = sigma.path().end();
  const Vec lhs = sigma.evaluate(reflect_point(field, x, z));
  const Vec rhs = reflect_point(field, y, sigma.evaluate(z));
  return (lhs - rhs).norm();
}

}  // namespace dyngeo
