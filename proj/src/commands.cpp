#include <sstream>

#include "dyngeo/errors.hpp"
#include "dyngeo/run.hpp"
#include "properties.hpp"

namespace dyngeo {

namespace {

using props::Context;
using Group = std::function<std::vector<CheckRecord>()>;

struct NamedGroup {
  std::string id;
  Group fn;
};

std::vector<CheckRecord> run_groups(const std::vector<NamedGroup>& groups, bool timing) {
  std::vector<NamedCheck> checks;
  std::vector<std::vector<CheckRecord>> results(groups.size());
  for (std::size_t i = 0; i < groups.size(); ++i) {
    checks.push_back({groups[i].id, [&, i]() {
                        results[i] = groups[i].fn();
                        return CheckRecord{};
                      }});
  }
  const auto status = run_checks(checks, timing);
  std::vector<CheckRecord> out;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (status[i].inputs.contains("error")) {
      out.push_back(status[i]);
      continue;
    }
    for (auto& r : results[i]) {
      if (timing && results[i].size() == 1) r.seconds = status[i].seconds;
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::string label(const char* prefix, double v) {
  std::ostringstream s;
  s << prefix << v;
  return s.str();
}

// A group evaluating one property with its own generator.
template <class F>
NamedGroup single(const RunConfig& cfg, std::string id, F f) {
  return {id, [=, &cfg]() {
            auto rng = check_rng(cfg.seed, id);
            return std::vector<CheckRecord>{f(rng)};
          }};
}

template <class F>
NamedGroup multi(const RunConfig& cfg, std::string id, F f) {
  return {id, [=, &cfg]() {
            auto rng = check_rng(cfg.seed, id);
            return f(rng);
          }};
}

std::vector<NamedGroup> check_groups(const RunConfig& cfg, const Context& c) {
  const int n = cfg.samples;
  std::vector<NamedGroup> g;
  if (n == 0) return g;
  using R = props::Rng;
  g.push_back(single(cfg, "reflection.involution", [&c, n](R& r) { return props::reflection_involution(c, r, n); }));
  g.push_back(single(cfg, "reflection.symplectic", [&c, n](R& r) { return props::reflection_symplectic(c, r, n); }));
  if (c.model->reflections()) {
    g.push_back(single(cfg, "reflection.connection", [&c, n](R& r) { return props::connection_from_reflections(c, r, n); }));
  }
  g.push_back(single(cfg, "ether.boundary", [&c, n](R& r) { return props::ether_boundary(c, r, n); }));
  g.push_back(single(cfg, "ether.zero-curvature", [&c, n](R& r) { return props::ether_zero_curvature(c, r, n); }));
  g.push_back(single(cfg, "ether.skew-symmetry", [&c, n](R& r) { return props::ether_skew(c, r, n); }));
  if (!c.model->flat()) {
    g.push_back(single(cfg, "ether.jet-order", [&c](R& r) { return props::jet_slope(c, r); }));
  }
  g.push_back(single(cfg, "translation.reflections", [&c, n](R& r) { return props::translation_reflections(c, r, n); }));
  g.push_back(single(cfg, "translation.path-independence", [&c, n](R& r) { return props::translation_path_independence(c, r, n); }));
  g.push_back(single(cfg, "translation.symplectic", [&c, n](R& r) { return props::translation_symplectic(c, r, n); }));
  g.push_back(single(cfg, "path.endpoint", [&c, n](R& r) { return props::path_endpoint(c, r, n); }));
  g.push_back(single(cfg, "path.parallel-transport", [&c, n](R& r) { return props::path_transport(c, r, n); }));
  g.push_back(single(cfg, "path.symplectic", [&c, n](R& r) { return props::path_symplectic(c, r, n); }));
  g.push_back(single(cfg, "path.groupoid", [&c, n](R& r) { return props::path_groupoid(c, r, n); }));
  g.push_back(single(cfg, "path.reflection-commutation", [&c, n](R& r) { return props::path_commutation(c, r, n); }));
  if (c.model->flat()) {
    g.push_back(multi(cfg, "flat.closed-forms", [&c, n](R& r) { return props::flat_closed_forms(c, r, n); }));
  } else {
    g.push_back(single(cfg, "path.shape-dependence", [&c, n](R& r) { return props::path_shape_dependence(c, r, n); }));
  }
  g.push_back(multi(cfg, "holonomy.curvature", [&c](R&) {
    return props::curvature_diagonal(c, Vec::Zero(c.model->dim()));
  }));
  return g;
}

std::vector<NamedGroup> flow_groups(const RunConfig& cfg, const Context& c,
                                    const HamiltonianSystem& sys) {
  const int n = cfg.samples;
  std::vector<NamedGroup> g;
  if (n == 0 || cfg.times.empty()) return g;
  using R = props::Rng;
  for (double t : cfg.times) {
    const std::string id = label("flow.hamiltonian@t=", t);
    g.push_back({id, [&, t, id]() {
                   auto rng = check_rng(cfg.seed, id);
                   auto r = props::hamiltonian_flow(c, sys, t, rng, n);
                   r.id = id;
                   return std::vector<CheckRecord>{r};
                 }});
  }
  g.push_back(single(cfg, "path.inverse", [&c, n](R& r) { return props::path_inverse(c, r, n); }));
  g.push_back(single(cfg, "path.batch-parity", [&c, n](R& r) { return props::path_batch_parity(c, r, n); }));
  return g;
}

std::vector<NamedGroup> translocate_groups(const RunConfig& cfg, const Context& c,
                                           const HamiltonianSystem& sys) {
  std::vector<NamedGroup> g;
  if (cfg.times.empty()) return g;
  const int n = cfg.samples;
  for (double t : cfg.times) {
    const std::string id = label("translocation@t=", t);
    g.push_back({id, [&, t, id]() {
                   auto rng = check_rng(cfg.seed, id);
                   auto rs = props::translocation(c, sys, t, rng, n);
                   return std::vector<CheckRecord>{combine(id, "translocation", std::move(rs))};
                 }});
  }
  return g;
}

Mat square_from(const std::vector<double>& entries, int d, const char* what) {
  if (static_cast<int>(entries.size()) != d * d) {
    throw ConfigError(std::string(what) + " needs " + std::to_string(d * d) + " entries");
  }
  Mat m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = entries[i * d + j];
  return m;
}

Mat default_generator(int d) {
  Mat l = Mat::Zero(d, d);
  for (int i = 0; i + 1 < d; i += 2) l.block(i, i, 2, 2) << 0.1, 1.0, -1.0, 0.2;
  return l;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"check", "flow", "holonomy", "translocate", "phase",
                                              "affine"};
  return names;
}

Report run_command(const std::string& command, const RunConfig& cfg) {
  Report report;
  report.command = command;
  report.config = config_json(cfg);
  if (command == "check" && cfg.suite == "acceptance") {
    report.checks = run_checks(acceptance_suite(cfg.seed), cfg.timing);
    return report;
  }
  const Context c = props::make_context(cfg);
  const int d = c.model->dim();
  std::vector<NamedGroup> groups;
  if (command == "check") {
    groups = check_groups(cfg, c);
    report.checks = run_groups(groups, cfg.timing);
  } else if (command == "flow" || command == "translocate") {
    HamiltonianParams hp;
    hp.coefficient = cfg.coefficient;
    hp.radius = cfg.radius;
    const HamiltonianSystem sys(c.model, make_hamiltonian(cfg.hamiltonian_name(), hp), c.ode);
    groups = command == "flow" ? flow_groups(cfg, c, sys) : translocate_groups(cfg, c, sys);
    report.checks = run_groups(groups, cfg.timing);
  } else if (command == "holonomy") {
    if (cfg.areas.empty()) return report;
    Table table;
    groups.push_back({"holonomy.small-loop", [&]() {
                        return std::vector<CheckRecord>{props::small_loop_slope(c, cfg.areas, &table)};
                      }});
    for (double a : cfg.areas) {
      if (a > 0.1) continue;
      const std::string id = label("holonomy.angle@area=", a);
      groups.push_back({id, [&, a, id]() {
                          auto r = props::holonomy_angle(c, a);
                          r.id = id;
                          return std::vector<CheckRecord>{r};
                        }});
    }
    groups.push_back({"holonomy.curvature", [&]() {
                        return props::curvature_diagonal(c, Vec::Zero(d));
                      }});
    report.checks = run_groups(groups, cfg.timing);
    if (!table.rows.empty()) report.tables.push_back(table);
  } else if (command == "phase") {
    for (int i = 0; i < cfg.phase_samples; ++i) {
      const std::string id = "phase#" + std::to_string(i);
      groups.push_back({id, [&, id]() {
                          auto rng = check_rng(cfg.seed, id);
                          return std::vector<CheckRecord>{
                              combine(id, "generating-phase", props::generating_phase_checks(c, rng))};
                        }});
    }
    report.checks = run_groups(groups, cfg.timing);
  } else if (command == "affine") {
    if (cfg.samples == 0) return report;
    props::AffineSetup setup;
    if (cfg.family == "linear") {
      if (!c.model->flat()) throw ConfigError("the linear family needs a flat model");
      setup = props::linear_setup(
          c, cfg.m_entries.empty() ? default_inversion_matrix(d) : square_from(cfg.m_entries, d, "m"));
    } else {
      setup = props::reflection_setup(c);
    }
    const Mat l = cfg.l_entries.empty() ? default_generator(d) : square_from(cfg.l_entries, d, "l");
    const auto u = make_vector_field(cfg.vector_field, l);
    groups.push_back({"affine.fields", [&]() {
                        auto rng = check_rng(cfg.seed, "affine.fields");
                        return props::affine_field_checks(c, setup, rng, cfg.samples);
                      }});
    const int nt = std::min(cfg.samples, 4);
    for (double t : cfg.times) {
      const std::string id = label("affine.translocation@t=", t);
      groups.push_back({id, [&, t, id]() {
                          auto rng = check_rng(cfg.seed, id);
                          return std::vector<CheckRecord>{
                              combine(id, "affine-translocation", props::affine_translocation(c, u, t, rng, nt))};
                        }});
    }
    report.checks = run_groups(groups, cfg.timing);
  } else {
    throw ConfigError("unknown command '" + command + "'");
  }
  return report;
}

}  // namespace dyngeo
