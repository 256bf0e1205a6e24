#pragma once

#include <random>
#include <string>
#include <vector>

#include "dyngeo/affine.hpp"
#include "dyngeo/ether.hpp"
#include "dyngeo/hamiltonian.hpp"
#include "dyngeo/run.hpp"

namespace dyngeo::props {

// Everything a property needs: the model, its Ether field and numerics.
struct Context {
  ModelPtr model;
  EtherPtr field;
  ode::Options ode;
  fd::Steps steps;
};

Context make_context(const std::string& model, const RunConfig& base = {});
Context make_context(const RunConfig& cfg);

using Rng = std::mt19937_64;

nlohmann::json vec_json(const Vec& v);
double sample_scale(const ManifoldModel& model);
Vec sample_point(const ManifoldModel& model, Rng& rng);
Vec sample_near(const ManifoldModel& model, Rng& rng, const Vec& c, double r);
Vec unit_vector(int d, Rng& rng);
// Bulged chart segment from a to b with a random offset of size <= 0.3 |b - a|.
Path random_path(const ManifoldModel& model, Rng& rng, const Vec& a, const Vec& b);

// Each property evaluates `n` random instances and returns the worst one.
CheckRecord reflection_involution(const Context& c, Rng& rng, int n);
CheckRecord reflection_symplectic(const Context& c, Rng& rng, int n);
CheckRecord ether_boundary(const Context& c, Rng& rng, int n);
CheckRecord ether_zero_curvature(const Context& c, Rng& rng, int n);
CheckRecord ether_skew(const Context& c, Rng& rng, int n);
CheckRecord jet_slope(const Context& c, Rng& rng);
CheckRecord connection_from_reflections(const Context& c, Rng& rng, int n);
CheckRecord translation_reflections(const Context& c, Rng& rng, int n);
CheckRecord translation_path_independence(const Context& c, Rng& rng, int n);
CheckRecord translation_symplectic(const Context& c, Rng& rng, int n);
CheckRecord path_endpoint(const Context& c, Rng& rng, int n);
CheckRecord path_transport(const Context& c, Rng& rng, int n);
CheckRecord path_symplectic(const Context& c, Rng& rng, int n);
CheckRecord path_inverse(const Context& c, Rng& rng, int n);
CheckRecord path_batch_parity(const Context& c, Rng& rng, int n);
CheckRecord path_groupoid(const Context& c, Rng& rng, int n);
CheckRecord path_commutation(const Context& c, Rng& rng, int n);
CheckRecord path_shape_dependence(const Context& c, Rng& rng, int n);
std::vector<CheckRecord> flat_closed_forms(const Context& c, Rng& rng, int n);

std::vector<CheckRecord> curvature_diagonal(const Context& c, const Vec& base);
// Small-loop deltas over `areas`; fills the (area, delta, slope) table.
CheckRecord small_loop_slope(const Context& c, const std::vector<double>& areas, Table* table);
CheckRecord holonomy_angle(const Context& c, double area);

CheckRecord hamiltonian_flow(const Context& c, const HamiltonianSystem& sys, double t, Rng& rng,
                             int n);
std::vector<CheckRecord> translocation(const Context& c, const HamiltonianSystem& sys, double t,
                                       Rng& rng, int n);

std::vector<CheckRecord> generating_phase_checks(const Context& c, Rng& rng);

struct AffineSetup {
  InversivePtr s_plus;
  InversivePtr s_minus;
  FieldPtr a_plus;
  FieldPtr a_minus;
  FieldPtr source;  // the field the inversions were integrated from, for the reverse round trip
  bool symplectic = false;
};
AffineSetup reflection_setup(const Context& c);
AffineSetup linear_setup(const Context& c, const Mat& m);
std::vector<CheckRecord> affine_field_checks(const Context& c, const AffineSetup& a, Rng& rng,
                                             int n);
std::vector<CheckRecord> affine_translocation(const Context& c, const VectorFieldPtr& u, double t,
                                              Rng& rng, int n);

}  // namespace dyngeo::props
