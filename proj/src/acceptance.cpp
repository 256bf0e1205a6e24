#include <omp.h>

#include "dyngeo/errors.hpp"
#include "dyngeo/run.hpp"
#include "properties.hpp"

namespace dyngeo {

namespace {

using props::Context;
using props::Rng;

constexpr int kSamples = 20;
constexpr int kPaths = 50;

const char* const kCurved[] = {"sphere-s2", "hyperbolic-h2"};

CheckRecord prefixed(CheckRecord r, const std::string& prefix) {
  r.id = prefix + "/" + r.id;
  return r;
}

void add(std::vector<CheckRecord>& parts, const std::string& prefix, std::vector<CheckRecord> rs) {
  for (auto& r : rs) parts.push_back(prefixed(std::move(r), prefix));
}

CheckRecord ac01(std::uint64_t seed) {
  std::vector<CheckRecord> parts;
  for (const char* name : {"flat-r2", "flat-r4"}) {
    RunConfig cfg;
    cfg.strategy = EtherStrategy::LineIntegral;
    const Context c = props::make_context(name, cfg);
    auto rng = check_rng(seed, std::string("AC01/") + name);
    add(parts, name, props::flat_closed_forms(c, rng, kSamples));
  }
  return combine("AC01", "closed-form", std::move(parts));
}

CheckRecord ac02(std::uint64_t seed) {
  std::vector<CheckRecord> parts;
  for (const char* name : kCurved) {
    const Context c = props::make_context(name);
    auto rng = check_rng(seed, std::string("AC02/") + name);
    add(parts, name,
        {props::reflection_involution(c, rng, kSamples), props::reflection_symplectic(c, rng, kSamples),
         props::translation_symplectic(c, rng, kSamples), props::path_symplectic(c, rng, kSamples),
         props::ether_skew(c, rng, kSamples), props::ether_zero_curvature(c, rng, kSamples),
         props::jet_slope(c, rng)});
  }
  return combine("AC02", "ether-axioms", std::move(parts));
}

CheckRecord ac03(std::uint64_t seed) {
  std::vector<CheckRecord> parts;
  for (const char* name : kCurved) {
    const Context c = props::make_context(name);
    auto rng = check_rng(seed, std::string("AC03/") + name);
    add(parts, name,
        {props::translation_reflections(c, rng, kSamples),
         props::translation_path_independence(c, rng, kSamples)});
  }
  return combine("AC03", "ether-translation", std::move(parts));
}

CheckRecord ac04(std::uint64_t seed) {
  std::vector<CheckRecord> parts;
  for (const char* name : kCurved) {
    const Context c = props::make_context(name);
    auto rng = check_rng(seed, std::string("AC04/") + name);
    add(parts, name, {props::path_endpoint(c, rng, kPaths), props::path_transport(c, rng, kPaths)});
  }
  return combine("AC04", "symplectic-path", std::move(parts));
}

CheckRecord ac05(std::uint64_t seed) {
  std::vector<CheckRecord> parts;
  for (const char* name : kCurved) {
    const Context c = props::make_context(name);
    auto rng = check_rng(seed, std::string("AC05/") + name);
    add(parts, name, {props::path_groupoid(c, rng, kSamples), props::path_commutation(c, rng, kSamples)});
  }
  const Context s = props::make_context("sphere-s2");
  auto rng = check_rng(seed, "AC05/shape");
  add(parts, "sphere-s2", {props::path_shape_dependence(s, rng, kSamples)});
  return combine("AC05", "groupoid", std::move(parts));
}

CheckRecord ac06(std::uint64_t) {
  std::vector<CheckRecord> parts;
  for (const char* name : kCurved) {
    const Context c = props::make_context(name);
    const Vec o = Vec::Zero(2);
    auto diag = props::curvature_diagonal(c, o);
    diag.pop_back();
    add(parts, name, std::move(diag));
    add(parts, name, {props::small_loop_slope(c, {0.04, 0.02, 0.01, 0.005}, nullptr)});
    for (double a : {0.1, 0.05, 0.02}) {
      auto r = props::holonomy_angle(c, a);
      r.id += "@" + std::to_string(a).substr(0, 4);
      add(parts, name, {r});
    }
  }
  return combine("AC06", "ether-curvature", std::move(parts));
}

CheckRecord ac07(std::uint64_t seed) {
  std::vector<CheckRecord> parts;
  struct Case {
    const char* model;
    const char* hamiltonian;
    double t;
  };
  for (const auto& k : {Case{"flat-r2", "flat-oscillator", 1.0}, Case{"flat-r2", "flat-quartic", 0.7},
                        Case{"sphere-s2", "sphere-height", 0.5},
                        Case{"hyperbolic-h2", "hyperbolic-quadratic", 0.4}}) {
    const Context c = props::make_context(k.model);
    const HamiltonianSystem sys(c.model, make_hamiltonian(k.hamiltonian), c.ode);
    auto rng = check_rng(seed, std::string("AC07/") + k.hamiltonian);
    add(parts, k.hamiltonian, props::translocation(c, sys, k.t, rng, 5));
  }
  return combine("AC07", "translocation", std::move(parts));
}

CheckRecord ac08(std::uint64_t seed) {
  std::vector<CheckRecord> parts;
  for (const char* name : {"flat-r2", "sphere-s2", "hyperbolic-h2"}) {
    const Context c = props::make_context(name);
    auto rng = check_rng(seed, std::string("AC08/") + name);
    add(parts, name, props::generating_phase_checks(c, rng));
  }
  return combine("AC08", "generating-phase", std::move(parts));
}

CheckRecord ac09(std::uint64_t seed) {
  std::vector<CheckRecord> parts;
  for (const char* name : {"flat-r2", "sphere-s2", "hyperbolic-h2"}) {
    const Context c = props::make_context(name);
    auto rng = check_rng(seed, std::string("AC09/") + name);
    add(parts, name, props::affine_field_checks(c, props::reflection_setup(c), rng, kSamples));
  }
  {
    const Context c = props::make_context("flat-r2");
    auto rng = check_rng(seed, "AC09/linear");
    add(parts, "linear", props::affine_field_checks(c, props::linear_setup(c, default_inversion_matrix(2)), rng,
                                                    kSamples));
    Mat l(2, 2);
    l << 0.1, 1.0, -1.0, 0.2;
    add(parts, "flat-r2", props::affine_translocation(c, make_vector_field("linear", l), 1.0, rng, 3));
  }
  {
    const Context c = props::make_context("sphere-s2");
    auto rng = check_rng(seed, "AC09/rotation");
    add(parts, "sphere-s2", props::affine_translocation(c, make_vector_field("rotation"), 1.0, rng, 3));
  }
  return combine("AC09", "inversive", std::move(parts));
}

CheckRecord ac10(std::uint64_t seed) {
  RunConfig cfg;
  cfg.model = "sphere-s2";
  cfg.samples = 3;
  cfg.seed = seed;
  const std::string first = run_command("check", cfg).to_json().dump();
  const std::string second = run_command("check", cfg).to_json().dump();
  const int threads = omp_get_max_threads();
  omp_set_num_threads(1);
  std::string serial;
  try {
    serial = run_command("check", cfg).to_json().dump();
  } catch (...) {
    omp_set_num_threads(threads);
    throw;
  }
  omp_set_num_threads(threads);
  cfg.model = "flat-r2";
  cfg.samples = 5;
  const std::string flat1 = run_command("check", cfg).to_json().dump();
  const std::string flat2 = run_command("check", cfg).to_json().dump();
  std::vector<CheckRecord> parts{
      below("repeat", "plumbing", first == second ? 0.0 : 1.0, 0.5, {{"bytes", first.size()}}),
      below("single-thread", "plumbing", first == serial ? 0.0 : 1.0, 0.5, {{"threads", threads}}),
      below("flat-repeat", "plumbing", flat1 == flat2 ? 0.0 : 1.0, 0.5, {{"bytes", flat1.size()}})};
  return combine("AC10", "plumbing", std::move(parts));
}

}  // namespace

const std::vector<std::string>& acceptance_ids() {
  static const std::vector<std::string> ids{"AC01", "AC02", "AC03", "AC04", "AC05",
                                            "AC06", "AC07", "AC08", "AC09", "AC10"};
  return ids;
}

CheckRecord acceptance_check(const std::string& id, std::uint64_t seed) {
  using Fn = CheckRecord (*)(std::uint64_t);
  static const Fn fns[] = {ac01, ac02, ac03, ac04, ac05, ac06, ac07, ac08, ac09, ac10};
  const auto& ids = acceptance_ids();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] == id) return fns[i](seed);
  }
  throw InvalidArgument("unknown acceptance check '" + id + "'");
}

std::vector<NamedCheck> acceptance_suite(std::uint64_t seed) {
  std::vector<NamedCheck> out;
  for (const auto& id : acceptance_ids()) {
    out.push_back({id, [id, seed]() { return acceptance_check(id, seed); }});
  }
  return out;
}

}  // namespace dyngeo
