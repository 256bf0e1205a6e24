#include "properties.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "dyngeo/errors.hpp"
#include "dyngeo/holonomy.hpp"
#include "dyngeo/path_map.hpp"
#include "dyngeo/phase.hpp"
#include "dyngeo/translocation.hpp"

namespace dyngeo::props {

Context make_context(const RunConfig& cfg) {
  Context c;
  c.model = cfg.make_model();
  c.field = cfg.make_field();
  c.ode = cfg.ode_options();
  c.steps = cfg.fd_steps();
  return c;
}

Context make_context(const std::string& model, const RunConfig& base) {
  RunConfig cfg = base;
  cfg.model = model;
  return make_context(cfg);
}

nlohmann::json vec_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

double sample_scale(const ManifoldModel& model) {
  return std::isfinite(model.cap()) ? 0.25 * model.cap() : 1.0;
}

Vec sample_point(const ManifoldModel& model, Rng& rng) {
  return model.sample_near(rng, Vec::Zero(model.dim()), sample_scale(model));
}

Vec sample_near(const ManifoldModel& model, Rng& rng, const Vec& c, double r) {
  return model.sample_near(rng, c, r);
}

Vec unit_vector(int d, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = normal(rng);
  return v.normalized();
}

Path random_path(const ManifoldModel& model, Rng& rng, const Vec& a, const Vec& b) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Vec offset = 0.3 * (b - a).norm() * unit(rng) * unit_vector(model.dim(), rng);
  Path p = Path::bulge(a, b, offset);
  for (int i = 1; i < 16; ++i) {
    if (!model.in_domain(p.point(i / 16.0))) return Path::line(a, b);
  }
  return p;
}

namespace {

template <class F>
CheckRecord sampled(int n, F&& one) {
  std::vector<CheckRecord> rs;
  for (int i = 0; i < n; ++i) rs.push_back(one());
  return worst_of(std::move(rs));
}

double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

// ---- Ether field and reflections ------------------------------------------

CheckRecord reflection_involution(const Context& c, Rng& rng, int n) {
  const auto& m = *c.model;
  return sampled(n, [&] {
    const Vec x = sample_point(m, rng);
    const Vec z = sample_near(m, rng, x, 0.5 * sample_scale(m));
    const Vec s = c.field->reflect(x, z, c.ode);
    const Vec s2 = c.field->reflect(x, s, c.ode);
    return below("reflection.involution", "reflections", (s2 - z).norm(), 1e-8,
                 {{"x", vec_json(x)}, {"z", vec_json(z)}});
  });
}

CheckRecord reflection_symplectic(const Context& c, Rng& rng, int n) {
  const auto& m = *c.model;
  const auto fam = m.reflections();
  return sampled(n, [&] {
    const Vec x = sample_point(m, rng);
    const Vec z = sample_near(m, rng, x, 0.5 * sample_scale(m));
    Mat d;
    Vec s;
    if (fam) {
      d = fam->d_dz(x, z);
      s = fam->apply(x, z);
    } else {
      d = fd::jacobian([&](const Vec& p) { return c.field->reflect(x, p, c.ode); }, z, 1e-4, true);
      s = c.field->reflect(x, z, c.ode);
    }
    return below("reflection.symplectic", "reflections", symplectic_defect(d, m.omega(z), m.omega(s)),
                 1e-7, {{"x", vec_json(x)}, {"z", vec_json(z)}});
  });
}

CheckRecord ether_boundary(const Context& c, Rng& rng, int n) {
  std::vector<CheckRecord> value, grad, hess;
  for (int i = 0; i < n; ++i) {
    const Vec x = sample_point(*c.model, rng);
    const auto b = boundary_residuals(*c.field, x, c.steps);
    const nlohmann::json in{{"x", vec_json(x)}};
    value.push_back(below("value", "ether-axioms", b.value, 1e-8, in));
    grad.push_back(below("gradient", "ether-axioms", b.gradient, 1e-7, in));
    hess.push_back(below("hessian", "ether-axioms", b.hessian, 1e-5, in));
  }
  return combine("ether.boundary", "ether-axioms",
                 {worst_of(std::move(value)), worst_of(std::move(grad)), worst_of(std::move(hess))});
}

CheckRecord ether_zero_curvature(const Context& c, Rng& rng, int n) {
  const auto& m = *c.model;
  return sampled(n, [&] {
    const Vec x = sample_point(m, rng);
    const Vec z = sample_near(m, rng, x, 0.4 * sample_scale(m));
    const Vec u = unit_vector(m.dim(), rng), v = unit_vector(m.dim(), rng);
    return below("ether.zero-curvature", "ether-axioms",
                 zero_curvature_residual(*c.field, x, z, u, v, c.steps), 1e-6,
                 {{"x", vec_json(x)}, {"z", vec_json(z)}, {"u", vec_json(u)}, {"v", vec_json(v)}});
  });
}

CheckRecord ether_skew(const Context& c, Rng& rng, int n) {
  const auto& m = *c.model;
  return sampled(n, [&] {
    const Vec x = sample_point(m, rng);
    const Vec z = sample_near(m, rng, x, 0.5 * sample_scale(m));
    return below("ether.skew-symmetry", "ether-axioms", skew_symmetry_residual(*c.field, x, z), 1e-6,
                 {{"x", vec_json(x)}, {"z", vec_json(z)}});
  });
}

CheckRecord jet_slope(const Context& c, Rng& rng) {
  const auto& m = *c.model;
  const JetEther jet(c.model, 3, 0.5);
  // Base point off the chart centre.
  std::uniform_real_distribution<double> band(0.4, 0.8);
  const Vec x = band(rng) * sample_scale(m) * unit_vector(m.dim(), rng);
  // Worst residual over several directions.
  std::vector<std::array<Vec, 3>> dirs;
  for (int k = 0; k < 6; ++k) {
    dirs.push_back({unit_vector(m.dim(), rng), unit_vector(m.dim(), rng), unit_vector(m.dim(), rng)});
  }
  std::vector<double> rs{0.02, 0.01, 0.005}, res;
  for (double r : rs) {
    double worst = 0.0;
    for (const auto& [dir, u, v] : dirs) {
      worst = std::max(worst, zero_curvature_residual(jet, x, x + r * dir, u, v, c.steps));
    }
    res.push_back(worst);
  }
  const double slope = fd::loglog_slope(rs, res);
  return below("ether.jet-order", "ether-axioms", std::abs(slope - 3.0), 0.3,
               {{"x", vec_json(x)}, {"radii", rs}, {"residuals", res}, {"slope", slope}});
}

CheckRecord connection_from_reflections(const Context& c, Rng& rng, int n) {
  const auto fam = c.model->reflections();
  if (!fam) throw InvalidArgument("connection_from_reflections: model has no reflections");
  return sampled(n, [&] {
    const Vec x = sample_point(*c.model, rng);
    const auto g = dyngeo::connection_from_reflections(*fam, x);
    return below("reflection.connection", "reflections", (g - c.model->gamma(x)).max_abs(), 1e-5,
                 {{"x", vec_json(x)}});
  });
}

// ---- path maps ------------------------------------------------------------

CheckRecord translation_reflections(const Context& c, Rng& rng, int n) {
  const auto& m = *c.model;
  const double r = 0.5 * sample_scale(m);
  return sampled(n, [&] {
    const Vec x = sample_point(m, rng);
    const Vec y = sample_near(m, rng, x, r), z = sample_near(m, rng, x, r);
    const Vec g = ether_translation(c.field, Path::line(x, y), c.ode).evaluate(z);
    const Vec ref = reflect_point(*c.field, y, reflect_point(*c.field, x, z));
    return below("translation.reflections", "ether-translation", (g - ref).norm(), 1e-7,
                 {{"x", vec_json(x)}, {"y", vec_json(y)}, {"z", vec_json(z)}});
  });
}

CheckRecord translation_path_independence(const Context& c, Rng& rng, int n) {
  const auto& m = *c.model;
  const double r = 0.5 * sample_scale(m);
  return sampled(n, [&] {
    const Vec x = sample_point(m, rng);
    const Vec y = sample_near(m, rng, x, r), z = sample_near(m, rng, x, r);
    const Vec g1 = ether_translation(c.field, Path::line(x, y), c.ode).evaluate(z);
    const Vec g2 = ether_translation(c.field, random_path(m, rng, x, y), c.ode).evaluate(z);
    return below("translation.path-independence", "ether-translation", (g1 - g2).norm(), 1e-7,
                 {{"x", vec_json(x)}, {"y", vec_json(y)}, {"z", vec_json(z)}});
  });
}

CheckRecord translation_symplectic(const Context& c, Rng& rng, int n) {
  const auto& m = *c.model;
  const double r = 0.5 * sample_scale(m);
  return sampled(n, [&] {
    const Vec x = sample_point(m, rng);
    const Vec y = sample_near(m, rng, x, r), z = sample_near(m, rng, x, r);
    const auto d = ether_translation(c.field, Path::line(x, y), c.ode).differential(z);
    return below("translation.symplectic", "ether-translation",
                 symplectic_defect(d.matrix, m.omega(d.source), m.omega(d.target)), 1e-7,
                 {{"x", vec_json(x)}, {"y", vec_json(y)}, {"z", vec_json(z)}});
  });
}

namespace {

struct RandomSigma {
  Vec a, b;
  Path path;
};

RandomSigma random_sigma(const ManifoldModel& m, Rng& rng) {
  const Vec a = sample_point(m, rng);
  const Vec b = sample_near(m, rng, a, sample_scale(m));
  return {a, b, random_path(m, rng, a, b)};
}

nlohmann::json sigma_json(const RandomSigma& s) { return {{"a", vec_json(s.a)}, {"b", vec_json(s.b)}}; }

}  // namespace

CheckRecord path_endpoint(const Context& c, Rng& rng, int n) {
  return sampled(n, [&] {
    const auto s = random_sigma(*c.model, rng);
    const auto map = path_symplectomorphism(c.field, s.path, c.ode);
    return below("path.endpoint", "symplectic-path", (map.evaluate(s.a) - s.b).norm(), 1e-7,
                 sigma_json(s));
  });
}

CheckRecord path_transport(const Context& c, Rng& rng, int n) {
  return sampled(n, [&] {
    const auto s = random_sigma(*c.model, rng);
    const auto map = path_symplectomorphism(c.field, s.path, c.ode);
    const auto pt = parallel_transport(*c.model, s.path, c.ode);
    return below("path.parallel-transport", "symplectic-path",
                 max_abs(map.differential(s.a).matrix - pt.matrix), 1e-5, sigma_json(s));
  });
}

CheckRecord path_symplectic(const Context& c, Rng& rng, int n) {
  const auto& m = *c.model;
  return sampled(n, [&] {
    const auto s = random_sigma(m, rng);
    const Vec z = sample_near(m, rng, s.a, 0.5 * sample_scale(m));
    const auto d = path_symplectomorphism(c.field, s.path, c.ode).differential(z);
    auto in = sigma_json(s);
    in["z"] = vec_json(z);
    return below("path.symplectic", "symplectic-path",
                 symplectic_defect(d.matrix, m.omega(d.source), m.omega(d.target)), 1e-7, in);
  });
}

CheckRecord path_inverse(const Context& c, Rng& rng, int n) {
  const auto& m = *c.model;
  return sampled(n, [&] {
    const auto s = random_sigma(m, rng);
    const Vec z = sample_near(m, rng, s.a, 0.5 * sample_scale(m));
    const auto map = path_symplectomorphism(c.field, s.path, c.ode);
    auto in = sigma_json(s);
    in["z"] = vec_json(z);
    return below("path.inverse", "symplectic-path", (map.inverse(map.evaluate(z)) - z).norm(), 1e-7,
                 in);
  });
}

CheckRecord path_batch_parity(const Context& c, Rng& rng, int n) {
  const auto& m = *c.model;
  const auto s = random_sigma(m, rng);
  std::vector<Vec> zs;
  for (int i = 0; i < n; ++i) zs.push_back(sample_near(m, rng, s.a, 0.5 * sample_scale(m)));
  const auto map = path_symplectomorphism(c.field, s.path, c.ode);
  const auto par = map.evaluate_batch(zs);
  const auto ser = map.evaluate_batch_serial(zs);
  double worst = 0.0;
  for (std::size_t i = 0; i < zs.size(); ++i) worst = std::max(worst, (par[i] - ser[i]).norm());
  auto in = sigma_json(s);
  in["points"] = n;
  return below("path.batch-parity", "plumbing", worst, 1e-14, in);
}

CheckRecord path_groupoid(const Context& c, Rng& rng, int n) {
  const auto& m = *c.model;
  return sampled(n, [&] {
    const auto s1 = random_sigma(m, rng);
    const Vec end = sample_near(m, rng, s1.b, sample_scale(m));
    const Path p2 = random_path(m, rng, s1.b, end);
    const Vec z = sample_near(m, rng, s1.a, 0.5 * sample_scale(m));
    const auto m1 = path_symplectomorphism(c.field, s1.path, c.ode);
    const auto m2 = path_symplectomorphism(c.field, p2, c.ode);
    const Vec direct = groupoid_compose(m2, m1).evaluate(z);
    auto in = sigma_json(s1);
    in["c"] = vec_json(end);
    in["z"] = vec_json(z);
    return below("path.groupoid", "groupoid", (direct - m2.evaluate(m1.evaluate(z))).norm(), 1e-7,
                 in);
  });
}

CheckRecord path_commutation(const Context& c, Rng& rng, int n) {
  const auto& m = *c.model;
  return sampled(n, [&] {
    const auto s = random_sigma(m, rng);
    const Vec z = sample_near(m, rng, s.a, 0.5 * sample_scale(m));
    const auto map = path_symplectomorphism(c.field, s.path, c.ode);
    auto in = sigma_json(s);
    in["z"] = vec_json(z);
    return below("path.reflection-commutation", "groupoid",
                 reflection_commutation_residual(*c.field, map, z), 1e-6, in);
  });
}

CheckRecord path_shape_dependence(const Context& c, Rng& rng, int n) {
  const auto& m = *c.model;
  double worst = 0.0;
  nlohmann::json at;
  for (int i = 0; i < n; ++i) {
    const Vec a = sample_point(m, rng);
    const Vec b = sample_near(m, rng, a, sample_scale(m));
    Vec off = unit_vector(m.dim(), rng);
    off *= 0.5 * (b - a).norm();
    const Vec z = sample_near(m, rng, a, 0.5 * sample_scale(m));
    const Vec p = path_symplectomorphism(c.field, Path::line(a, b), c.ode).evaluate(z);
    const Vec q = path_symplectomorphism(c.field, Path::bulge(a, b, off), c.ode).evaluate(z);
    if ((p - q).norm() > worst) {
      worst = (p - q).norm();
      at = {{"a", vec_json(a)}, {"b", vec_json(b)}, {"z", vec_json(z)}, {"offset", vec_json(off)}};
    }
  }
  at["evaluations"] = n;
  return above("path.shape-dependence", "symplectic-path", worst, 1e-3, at);
}

std::vector<CheckRecord> flat_closed_forms(const Context& c, Rng& rng, int n) {
  const auto& m = *c.model;
  std::vector<CheckRecord> refl, trans, path, expo;
  for (int i = 0; i < n; ++i) {
    const Vec x = sample_point(m, rng), y = sample_point(m, rng), z = sample_point(m, rng);
    const Vec v = sample_point(m, rng);
    const nlohmann::json in{{"x", vec_json(x)}, {"y", vec_json(y)}, {"z", vec_json(z)}};
    refl.push_back(below("flat.reflection", "closed-form",
                         (c.field->reflect(x, z, c.ode) - (2.0 * x - z)).norm(), 1e-8, in));
    const Path p = random_path(m, rng, x, y);
    trans.push_back(below("flat.translation", "closed-form",
                          (ether_translation(c.field, p, c.ode).evaluate(z) - (z + 2.0 * (y - x))).norm(),
                          1e-8, in));
    path.push_back(below("flat.path", "closed-form",
                         (path_symplectomorphism(c.field, p, c.ode).evaluate(z) - (z + (y - x))).norm(),
                         1e-8, in));
    expo.push_back(below("flat.exponential", "closed-form",
                         (ether_exponential(*c.field, x, v, 1.0, c.ode) - (x + v)).norm(), 1e-8,
                         {{"x", vec_json(x)}, {"v", vec_json(v)}}));
  }
  return {worst_of(std::move(refl)), worst_of(std::move(trans)), worst_of(std::move(path)),
          worst_of(std::move(expo))};
}

// ---- holonomy -------------------------------------------------------------

std::vector<CheckRecord> curvature_diagonal(const Context& c, const Vec& base) {
  const auto d = diagonal_identities(*c.field, base, c.steps);
  const nlohmann::json in{{"base", vec_json(base)}};
  return {below("holonomy.curvature-value", "ether-curvature", d.value, 1e-8, in),
          below("holonomy.curvature-gradient", "ether-curvature", d.gradient, 1e-5, in),
          below("holonomy.curvature-hessian", "ether-curvature", d.hessian, 1e-3, in),
          below("holonomy.curvature-symplectic", "ether-curvature", d.sp_membership, 1e-8, in)};
}

namespace {

Vec probe_point(int d) {
  Vec z = Vec::Zero(d);
  z[0] = 0.3;
  z[1] = 0.2;
  return z;
}

}  // namespace

CheckRecord small_loop_slope(const Context& c, const std::vector<double>& areas, Table* table) {
  const int d = c.model->dim();
  const Vec base = Vec::Zero(d);
  const auto rep = small_loop_expansion(c.field, base, 0, 1, areas, probe_point(d), c.ode);
  const double max_delta = *std::max_element(rep.deltas.begin(), rep.deltas.end());
  if (table) {
    table->name = "areas";
    table->columns = {"area", "delta", "slope"};
    for (std::size_t i = 0; i < areas.size(); ++i) {
      table->rows.push_back({areas[i], rep.deltas[i], c.model->flat() ? 0.0 : rep.slope});
    }
  }
  const nlohmann::json in{{"areas", areas}, {"deltas", rep.deltas}, {"z", vec_json(probe_point(d))}};
  if (c.model->flat()) return below("holonomy.small-loop", "holonomy", max_delta, 1e-10, in);
  if (areas.size() < 2) return below("holonomy.small-loop", "holonomy", max_delta, 1.0, in);
  return above("holonomy.small-loop", "holonomy", rep.slope, 1.5, in);
}

CheckRecord holonomy_angle(const Context& c, double area) {
  const auto& m = *c.model;
  const int d = m.dim();
  double k = 0.0, r2 = area / std::numbers::pi;
  if (const auto* s = dynamic_cast<const SphereModel*>(&m)) {
    const double big = 4.0 * std::numbers::pi * s->radius() * s->radius();
    k = 1.0 / (s->radius() * s->radius());
    r2 = area / (big - area);
  } else if (const auto* h = dynamic_cast<const HyperbolicModel*>(&m)) {
    const double big = 4.0 * std::numbers::pi * h->radius() * h->radius();
    k = -1.0 / (h->radius() * h->radius());
    r2 = area / (big + area);
  }
  Vec base = Vec::Zero(d);
  base[0] = std::sqrt(r2);
  const auto loop = circle_loop(base, Vec::Zero(d));
  const Mat hol = kinematic_holonomy(c.field, loop, c.ode).matrix;
  const double angle = rotation_angle(hol.topLeftCorner(2, 2));
  const double expected = k * area;
  const nlohmann::json in{{"area", area}, {"angle", angle}, {"expected", expected}};
  if (expected == 0.0) return below("holonomy.angle", "holonomy", std::abs(angle), 1e-8, in);
  return below("holonomy.angle", "holonomy", std::abs(angle - expected) / std::abs(expected), 1e-2,
               in);
}

// ---- Hamiltonian flows and translocation ----------------------------------

CheckRecord hamiltonian_flow(const Context& c, const HamiltonianSystem& sys, double t, Rng& rng,
                             int n) {
  const auto& m = *c.model;
  const auto& h = sys.hamiltonian();
  std::vector<CheckRecord> energy, symp;
  for (int i = 0; i < n; ++i) {
    const Vec x = sample_point(m, rng);
    const nlohmann::json in{{"x", vec_json(x)}, {"t", t}};
    const Vec xt = sys.flow(t, x);
    energy.push_back(below("energy", "plumbing", std::abs(h.value(xt) - h.value(x)), 1e-8, in));
    const auto d = sys.flow_differential(t, x);
    symp.push_back(below("symplectic", "plumbing",
                         symplectic_defect(d.matrix, m.omega(d.source), m.omega(d.target)), 1e-7, in));
  }
  return combine("flow.hamiltonian", "plumbing", {worst_of(std::move(energy)), worst_of(std::move(symp))});
}

std::vector<CheckRecord> translocation(const Context& c, const HamiltonianSystem& sys, double t,
                                       Rng& rng, int n) {
  const auto& m = *c.model;
  const Vec y = sample_point(m, rng);
  const TranslocatedSystem ts(c.field, sys, y);
  const nlohmann::json in{{"y", vec_json(y)}, {"t", t}, {"hamiltonian", sys.hamiltonian().name()}};
  std::vector<CheckRecord> fact, osc;
  const bool oscillator = m.flat() && sys.hamiltonian().name() == "flat-oscillator";
  for (int i = 0; i < n; ++i) {
    const Vec x = sample_near(m, rng, y, 0.5 * sample_scale(m));
    auto xin = in;
    xin["x"] = vec_json(x);
    fact.push_back(below("translocation.factorization", "translocation",
                         factorization_residual(ts, t, x), 1e-6, xin));
    if (oscillator) {
      osc.push_back(below("translocation.oscillator", "translocation",
                          std::abs(ts.value(t, x) - 0.5 * (x - y).squaredNorm()), 1e-9, xin));
    }
  }
  std::vector<CheckRecord> out;
  if (n > 0) out.push_back(worst_of(std::move(fact)));
  if (!osc.empty()) out.push_back(worst_of(std::move(osc)));
  out.push_back(below("translocation.anchor-value", "translocation", std::abs(ts.value(t, y)), 1e-7, in));
  out.push_back(below("translocation.anchor-gradient", "translocation", ts.gradient(t, y).norm(), 1e-7, in));
  out.push_back(below("translocation.hessian", "translocation", hessian_check(ts, t).residual, 1e-4, in));
  const auto fv = first_variation(ts, t);
  out.push_back(below("translocation.first-variation", "translocation", fv.residual, 1e-5, in));
  const double cq = covariant_quadratic_residual(sys, y, t);
  if (cq < 1e-6) {
    auto cin = in;
    cin["covariant_quadratic_residual"] = cq;
    out.push_back(below("translocation.closed-form", "translocation",
                        closed_form_monodromy_residual(ts, t, fv), 1e-6, cin));
  }
  return out;
}

// ---- generating phase -----------------------------------------------------

std::vector<CheckRecord> generating_phase_checks(const Context& c, Rng& rng) {
  const auto& m = *c.model;
  const double r = sample_scale(m);
  const Vec a = sample_near(m, rng, Vec::Zero(m.dim()), 0.5 * r);
  const Vec b = sample_near(m, rng, a, 0.5 * r);
  const Vec x = sample_near(m, rng, 0.5 * (a + b), 0.3 * r);
  const auto sigma = path_symplectomorphism(c.field, Path::line(a, b), c.ode);
  const nlohmann::json in{{"a", vec_json(a)}, {"b", vec_json(b)}, {"x", vec_json(x)}};
  const auto gp = generating_phase(c.field, sigma, x);
  PhaseOptions bulge;
  bulge.aux = AuxiliaryPath::Bulge;
  const auto gb = generating_phase(c.field, sigma, x, bulge);
  const Vec hj = hamilton_jacobi_residual(c.field, sigma, x, gp.level);
  auto gin = in;
  gin["level"] = gp.level;
  return {below("phase.differential", "generating-phase", gp.dphi_residual, 1e-4, gin),
          below("phase.mesh-convergence", "generating-phase", gp.mesh_change, 1e-5, gin),
          below("phase.hamilton-jacobi", "generating-phase", hj.norm(), 1e-4, gin),
          below("phase.auxiliary-path", "generating-phase", (gp.dphi - gb.dphi).norm(), 1e-5, gin)};
}

// ---- affine ---------------------------------------------------------------

AffineSetup reflection_setup(const Context& c) {
  const auto fam = c.model->reflections();
  if (!fam) throw InvalidArgument("reflection_setup: model has no reflections");
  AffineSetup a;
  a.s_plus = std::make_shared<FamilyInversions>(fam, true);
  a.s_minus = a.s_plus;
  a.a_plus = std::make_shared<InversionField>(a.s_plus, c.model);
  a.a_minus = std::make_shared<ConjugateField>(a.a_plus, a.s_plus);
  a.source = c.field;
  a.symplectic = c.model->symplectic();
  return a;
}

AffineSetup linear_setup(const Context& c, const Mat& m) {
  const int d = c.model->dim();
  if (m.rows() != d || m.cols() != d) throw ConfigError("M must be " + std::to_string(d) + " x " + std::to_string(d));
  AffineSetup a;
  a.s_plus = std::make_shared<LinearInversions>(m);
  a.s_minus = std::make_shared<LinearInversions>(m.inverse());
  a.a_plus = std::make_shared<InversionField>(a.s_plus, c.model);
  a.a_minus = std::make_shared<ConjugateField>(a.a_plus, a.s_plus);
  a.source = std::make_shared<ConstantField>(Mat::Identity(d, d) - m);
  const Mat w = c.model->omega(Vec::Zero(d));
  a.symplectic = c.model->flat() && symplectic_defect(m, w, w) < 1e-12;
  return a;
}

std::vector<CheckRecord> affine_field_checks(const Context& c, const AffineSetup& a, Rng& rng,
                                             int n) {
  const auto& m = *c.model;
  const int d = m.dim();
  const double r = 0.5 * sample_scale(m);
  const auto& sp = *a.s_plus;
  const auto& ap = *a.a_plus;
  const auto& am = *a.a_minus;
  const FieldInversions integrated(a.source, c.ode);
  const InversionField rebuilt(std::shared_ptr<const InversiveStructure>(&integrated, [](auto*) {}));
  auto gamma = [&](const Vec& p) { return inversion_connection(sp, p); };

  std::vector<std::vector<CheckRecord>> rows(13);
  std::vector<std::vector<CheckRecord>> symp(6);
  double skew = 0.0, margin = std::numeric_limits<double>::infinity();
  nlohmann::json skew_at;
  for (int i = 0; i < n; ++i) {
    const Vec x = sample_point(m, rng);
    const Vec z = sample_near(m, rng, x, r);
    const Vec y = sample_near(m, rng, x, r);
    const Vec u = unit_vector(d, rng), v = unit_vector(d, rng);
    const nlohmann::json in{{"x", vec_json(x)}, {"z", vec_json(z)}};
    const Mat eye = Mat::Identity(d, d);
    const Mat apx = ap.cartan(x), amx = am.cartan(x);
    int k = 0;
    rows[k++].push_back(below("affine.round-trip-inversions", "inversive",
                              (inversions_from_field(ap, x, z, c.ode) - sp.apply(x, z)).norm(), 1e-6, in));
    rows[k++].push_back(below("affine.round-trip-field", "inversive",
                              max_abs(rebuilt.field(x, z) - a.source->field(x, z)), 1e-6, in));
    rows[k++].push_back(below("affine.zero-curvature", "internal-field",
                              field_zero_curvature_residual(ap, x, z, u, v, c.steps), 1e-6, in));
    rows[k++].push_back(below("affine.conjugate-zero-curvature", "internal-field",
                              field_zero_curvature_residual(am, x, z, u, v, c.steps), 1e-6, in));
    rows[k++].push_back(below("affine.conjugate-inversions", "inversive",
                              (inversions_from_field(am, x, z, c.ode) - sp.inverse(x, z)).norm(), 1e-8, in));
    rows[k++].push_back(below("affine.conjugate-cartan", "internal-field",
                              max_abs(amx - apx * (apx - eye).inverse()), 1e-8, in));
    rows[k++].push_back(below("affine.structural-equation", "internal-field",
                              structural_equation_residual(ap, gamma, x, u, v, c.steps), 1e-5, in));
    rows[k++].push_back(below("affine.adjoint-boundary", "internal-field",
                              adjoint_boundary_residual(ap, gamma(x), x, c.steps), 1e-6, in));
    rows[k++].push_back(below("affine.internal-geodesic", "internal-field",
                              internal_geodesic_residual(ap, am, sp, x, r * v, c.ode), 1e-7, in));
    auto yin = in;
    yin["y"] = vec_json(y);
    const Vec g = internal_translation(a.a_plus, random_path(m, rng, y, x), c.ode).evaluate(z);
    rows[k++].push_back(below("affine.translation-inversions", "inversive",
                              (g - sp.apply(x, a.s_minus->apply(y, z))).norm(), 1e-6, yin));
    rows[k++].push_back(below("affine.fixed-point", "inversive", (sp.apply(x, x) - x).norm(), 1e-12, in));
    if (sp.involutive()) {
      rows[k].push_back(below("affine.skew-symmetry", "inversive",
                              involution_skew_residual(ap, sp, x, z), 1e-6, in));
    }
    ++k;
    if (m.reflections() && dynamic_cast<const FamilyInversions*>(&sp)) {
      rows[k].push_back(below("affine.levi-civita", "inversive", (gamma(x) - m.gamma(x)).max_abs(),
                              1e-5, in));
    }
    if (!sp.involutive()) {
      const double s = involution_skew_residual(ap, sp, x, z);
      if (s > skew) skew = s, skew_at = in;
    }
    margin = std::min(margin, cartan_spectrum_margin(apx));
    if (a.symplectic) {
      const auto rep = symplectic_inversive_checks(m, a.s_plus, a.s_minus, x, z, c.steps);
      const std::pair<const char*, double> items[] = {
          {"affine.symplectic-connection", rep.omega_parallel},
          {"affine.cyclic-torsion", rep.cyclic_torsion},
          {"affine.hamiltonian-diagonal", rep.diagonal_value},
          {"affine.hamiltonian-field", rep.hamiltonian_field},
          {"affine.hamiltonian-inversion", rep.inversion_relation},
          {"affine.hamiltonian-second-derivative", rep.second_derivative}};
      for (int j = 0; j < 6; ++j) symp[j].push_back(below(items[j].first, "inversive", items[j].second, 1e-6, in));
    }
  }
  std::vector<CheckRecord> out;
  if (n == 0) return out;
  for (auto& row : rows)
    if (!row.empty()) out.push_back(worst_of(std::move(row)));
  if (!sp.involutive()) {
    skew_at["evaluations"] = n;
    out.push_back(above("affine.skew-discrimination", "inversive", skew, 1e-2, skew_at));
  }
  out.push_back(above("affine.cartan-margin", "internal-field", margin, 1e-3, {{"evaluations", n}}));
  for (auto& row : symp)
    if (!row.empty()) out.push_back(worst_of(std::move(row)));
  return out;
}

std::vector<CheckRecord> affine_translocation(const Context& c, const VectorFieldPtr& u, double t,
                                              Rng& rng, int n) {
  const auto& m = *c.model;
  const Vec y = sample_point(m, rng);
  const AffineTranslocation tr(c.model, c.field, u, y, c.ode);
  std::vector<CheckRecord> fact, eq, lin, closed;
  for (int i = 0; i < n; ++i) {
    const Vec x = sample_near(m, rng, y, 0.5 * sample_scale(m));
    const nlohmann::json in{{"y", vec_json(y)}, {"x", vec_json(x)}, {"t", t}, {"field", u->name()}};
    const auto rep = affine_translocation_checks(tr, t, x);
    fact.push_back(below("affine.translocation-factorization", "affine-translocation", rep.factorization, 1e-6, in));
    eq.push_back(below("affine.translocation-equilibrium", "affine-translocation", rep.equilibrium, 1e-8, in));
    lin.push_back(below("affine.translocation-linearisation", "affine-translocation", rep.linearisation, 1e-5, in));
    if (rep.consistency < 1e-8) {
      auto cin = in;
      cin["consistency"] = rep.consistency;
      closed.push_back(below("affine.translocation-closed-form", "affine-translocation", rep.closed_form, 1e-8, cin));
    }
  }
  std::vector<CheckRecord> out;
  if (n == 0) return out;
  out.push_back(worst_of(std::move(fact)));
  out.push_back(worst_of(std::move(eq)));
  out.push_back(worst_of(std::move(lin)));
  if (!closed.empty()) out.push_back(worst_of(std::move(closed)));
  return out;
}

}  // namespace dyngeo::props
