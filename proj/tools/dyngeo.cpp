#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dyngeo/errors.hpp"
#include "dyngeo/run.hpp"

namespace {

void print_check(const dyngeo::CheckRecord& r) {
  std::printf("%-4s %-48s %-22s %.3e %s %.1e", r.pass ? "ok" : "FAIL", r.id.c_str(), r.tag.c_str(),
              r.residual, r.at_least ? ">=" : "<", r.threshold);
  if (r.seconds) std::printf("  %.3fs", *r.seconds);
  std::printf("\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dyngeo: numerical checks for dynamic geometry on symplectic and affine models"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> sets;
  dyngeo::ConfigMap flags;
  auto flag = [&](const std::string& name, const std::string& key, const std::string& help) {
    app.add_option_function<std::string>(name, [&flags, key](const std::string& v) { flags[key] = v; },
                                         help);
  };
  app.add_option("--config", config_path, "key = value config file");
  app.add_option("--set", sets, "override any config key (key=value), repeatable");
  flag("--model", "model", "flat-r2, flat-r4, flat-r2n, sphere-s2, hyperbolic-h2");
  flag("--seed", "seed", "random seed");
  flag("--samples", "samples", "random instances per property");
  flag("--output,-o", "output_dir", "report directory (default: DYNGEO_OUTPUT_DIR or .)");
  flag("--suite", "suite", "check: module or acceptance");
  flag("--times", "times", "comma-separated flow times");
  flag("--areas", "areas", "comma-separated loop areas");
  flag("--hamiltonian", "hamiltonian", "Hamiltonian registry name");
  flag("--phase-samples", "phase_samples", "phase: number of random instances");
  flag("--family", "family", "affine: reflections or linear");
  flag("--m", "m", "affine: row-major inversion matrix entries");
  flag("--field", "vector_field", "affine: linear or rotation");
  flag("--l", "l", "affine: row-major generator entries for the linear field");
  bool timing = false;
  app.add_flag("--timing", timing, "record wall time per check (reports are then not reproducible)");

  const std::vector<std::pair<std::string, std::string>> subs{
      {"check", "invariant suite of the chosen model, or the acceptance suite"},
      {"flow", "Hamiltonian flows and path-map inverses"},
      {"holonomy", "small-loop holonomy sweep and curvature at the base point"},
      {"translocate", "translocated flows at the configured times"},
      {"phase", "generating phase of random paths"},
      {"affine", "inversive structures and affine translocation"}};
  for (const auto& [name, help] : subs) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  dyngeo::Report report;
  std::vector<std::string> written;
  try {
    dyngeo::ConfigMap kv;
    if (!config_path.empty()) kv = dyngeo::read_config_file(config_path);
    if (const char* env = std::getenv("DYNGEO_OUTPUT_DIR"); env && *env) kv["output_dir"] = env;
    for (const auto& [k, v] : flags) kv[k] = v;
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos || eq == 0) throw dyngeo::ConfigError("--set expects key=value, got '" + s + "'");
      kv[s.substr(0, eq)] = s.substr(eq + 1);
    }
    if (timing) kv["timing"] = "true";
    const auto cfg = dyngeo::make_config(kv);
    report = dyngeo::run_command(command, cfg);
    written = dyngeo::write_report(report, cfg.output_dir);
  } catch (const dyngeo::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const dyngeo::DyngeoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  for (const auto& r : report.checks) print_check(r);
  for (const auto& t : report.tables) {
    std::printf("table %s:", t.name.c_str());
    for (const auto& c : t.columns) std::printf(" %s", c.c_str());
    std::printf("\n");
    for (const auto& row : t.rows) {
      for (double v : row) std::printf(" %.6e", v);
      std::printf("\n");
    }
  }
  for (const auto& p : written) std::printf("wrote %s\n", p.c_str());
  if (report.passed()) {
    std::printf("%zu checks passed\n", report.checks.size());
    return 0;
  }
  std::printf("worst offenders:\n");
  for (const auto* r : report.worst(5)) {
    if (r->pass) break;
    std::printf("  %s  ratio %.3g\n", r->id.c_str(), r->ratio());
    for (const auto& p : r->parts) {
      if (!p.pass) std::printf("    %s  ratio %.3g\n", p.id.c_str(), p.ratio());
    }
  }
  return 1;
}
