#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "dyngeo/ether.hpp"

namespace dyngeo {

struct RunConfig {
  std::string model = "flat-r2";
  int n = 1;
  double radius = 1.0;
  std::optional<double> cap;
  std::optional<EtherStrategy> strategy;
  int jet_order = 3;
  double jet_radius = 0.2;
  int quad_panels = 4;
  std::string hamiltonian;  // empty: the model's default
  double coefficient = 0.1;
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double fd_first = 1e-5;
  double fd_second = 1e-3;
  std::vector<double> areas{0.04, 0.02, 0.01, 0.005};
  std::vector<double> times{0.5, 1.0};
  int samples = 20;
  int phase_samples = 2;
  std::uint64_t seed = 7;
  std::string output_dir = ".";
  std::string suite = "module";  // "module" or "acceptance"
  bool timing = false;
  std::string family = "reflections";  // affine: "reflections" or "linear"
  std::vector<double> m_entries;       // row-major; empty: rotation by pi/2
  std::string vector_field = "linear";
  std::vector<double> l_entries;  // row-major; empty: a fixed 2 x 2 example

  ModelPtr make_model() const;
  EtherPtr make_field() const;
  ode::Options ode_options() const;
  fd::Steps fd_steps() const;
  std::string hamiltonian_name() const;
};

using ConfigMap = std::map<std::string, std::string>;

// key = value lines, '#' starts a comment. Throws ConfigError.
ConfigMap read_config_file(const std::string& path);
// Builds and validates a config; unknown keys and bad values throw ConfigError.
RunConfig make_config(const ConfigMap& kv);
nlohmann::json config_json(const RunConfig& cfg);

// Generator seeded from (seed, check id), independent of evaluation order.
std::mt19937_64 check_rng(std::uint64_t seed, const std::string& id);

struct CheckRecord {
  std::string id;
  std::string tag;
  nlohmann::json inputs = nlohmann::json::object();
  double residual = 0.0;
  double threshold = 0.0;
  bool at_least = false;  // pass when residual >= threshold instead of <
  bool pass = false;
  std::optional<double> seconds;
  std::vector<CheckRecord> parts;

  // residual / threshold for upper bounds, threshold / residual for lower ones.
  double ratio() const;
};

CheckRecord below(std::string id, std::string tag, double residual, double threshold,
                  nlohmann::json inputs = nlohmann::json::object());
CheckRecord above(std::string id, std::string tag, double value, double threshold,
                  nlohmann::json inputs = nlohmann::json::object());
// Passes when every part passes; residual is the worst part ratio, threshold 1.
CheckRecord combine(std::string id, std::string tag, std::vector<CheckRecord> parts);
// Keeps the worst part (by ratio) among several evaluations of one property.
CheckRecord worst_of(std::vector<CheckRecord> records);

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::string csv() const;
};

struct Report {
  std::string command;
  nlohmann::json config;
  std::vector<CheckRecord> checks;
  std::vector<Table> tables;

  bool passed() const;
  nlohmann::json to_json() const;
  // check_id, eq_tag, residual, threshold, pass; parts are listed as id/part.
  std::string csv() const;
  std::vector<const CheckRecord*> worst(std::size_t count) const;
};

using CheckFn = std::function<CheckRecord()>;
struct NamedCheck {
  std::string id;
  CheckFn fn;
};

// Runs checks over OpenMP threads; records are assembled in list order.
// Errors raised by a check become a failing record with infinite residual.
std::vector<CheckRecord> run_checks(const std::vector<NamedCheck>& checks, bool timing);

// Subcommands: check, flow, holonomy, translocate, phase, affine.
Report run_command(const std::string& command, const RunConfig& cfg);
const std::vector<std::string>& command_names();

// The ten acceptance criteria, each a single named check.
const std::vector<std::string>& acceptance_ids();
CheckRecord acceptance_check(const std::string& id, std::uint64_t seed);
std::vector<NamedCheck> acceptance_suite(std::uint64_t seed);

// Writes <dir>/<command>.json, <dir>/<command>.csv and one CSV per table;
// returns the written paths.
std::vector<std::string> write_report(const Report& report, const std::string& dir);

}  // namespace dyngeo
