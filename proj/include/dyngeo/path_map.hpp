#pragma once

#include <vector>

#include "dyngeo/ether.hpp"
#include "dyngeo/field.hpp"
#include "dyngeo/manifold.hpp"
#include "dyngeo/ode.hpp"
#include "dyngeo/path.hpp"

namespace dyngeo {

// The diffeomorphism obtained by integrating dY/dt = factor * A_{y(t)}(Y) ydot(t)
// over t in [0, 1]. factor 1 gives Ether translations, factor 1/2 symplectic
// paths. Every query re-integrates; the object is immutable.
class PathMap {
 public:
  PathMap(FieldPtr field, Path path, double factor, ode::Options opts = {});

  Vec evaluate(const Vec& z) const;
  // Differential at z by the variational equation integrated with the flow.
  LinearMap differential(const Vec& z) const;
  // Backward integration from t = 1 to t = 0.
  Vec inverse(const Vec& z) const;

  // Evaluates many points; the parallel version distributes points over
  // OpenMP threads, the serial one is the reference.
  std::vector<Vec> evaluate_batch(const std::vector<Vec>& zs) const;
  std::vector<Vec> evaluate_batch_serial(const std::vector<Vec>& zs) const;

  const FieldPtr& field() const { return field_; }
  const Path& path() const { return path_; }
  double factor() const { return factor_; }
  const ode::Options& options() const { return opts_; }

 private:
  Vec flow(const Vec& z, double t0, double t1) const;

  FieldPtr field_;
  Path path_;
  double factor_;
  ode::Options opts_;
};

// g_{y(1), y(0)}.
PathMap ether_translation(FieldPtr field, Path path, const ode::Options& opts = {});
// [sigma].
PathMap path_symplectomorphism(FieldPtr field, Path path, const ode::Options& opts = {});

// dE/dt = 1/2 A_x(E) v, E(0) = x, integrated to time t.
Vec ether_exponential(const InternalVectorField& field, const Vec& x, const Vec& v, double t,
                      const ode::Options& opts = {});

// The map of the concatenated path (m1 first, then m2). Throws InvalidArgument
// when m1 does not end where m2 starts or the two maps differ in field or factor.
PathMap groupoid_compose(const PathMap& m2, const PathMap& m1);

// |[sigma](s_x(z)) - s_y([sigma](z))| with x, y the ends of sigma.
double reflection_commutation_residual(const EtherField& field, const PathMap& sigma, const Vec& z);

// The model's closed-form reflection when it has one, the integrated one otherwise.
Vec reflect_point(const EtherField& field, const Vec& x, const Vec& z);

}  // namespace dyngeo
