#include <cstdio>
#include <filesystem>
#include <fstream>

#include <doctest.h>

#include "dyngeo/errors.hpp"
#include "dyngeo/run.hpp"

using namespace dyngeo;

TEST_CASE("config keys and validation") {
  const auto c = make_config({{"model", "sphere-s2"}, {"seed", "11"}, {"areas", "0.1, 0.05"}, {"times", ""}});
  CHECK(c.model == "sphere-s2");
  CHECK(c.seed == 11);
  CHECK(c.areas == std::vector<double>{0.1, 0.05});
  CHECK(c.times.empty());
  CHECK_THROWS_AS(make_config({{"bogus", "1"}}), ConfigError);
  CHECK_THROWS_AS(make_config({{"samples", "many"}}), ConfigError);
  CHECK_THROWS_AS(make_config({{"abs_tol", "0"}}), ConfigError);
  CHECK_THROWS_AS(make_config({{"model", "torus"}}), ConfigError);
  CHECK_THROWS_AS(make_config({{"hamiltonian", "nope"}}), ConfigError);
  CHECK_THROWS_AS(make_config({{"areas", "0.1,-1"}}), ConfigError);
}

TEST_CASE("config file parsing") {
  const auto path = std::filesystem::temp_directory_path() / "dyngeo_unit.cfg";
  {
    std::ofstream out(path);
    out << "# comment\nmodel = hyperbolic-h2\n\nsamples=3  # trailing\n";
  }
  const auto kv = read_config_file(path.string());
  CHECK(kv.at("model") == "hyperbolic-h2");
  CHECK(kv.at("samples") == "3");
  {
    std::ofstream out(path);
    out << "no equals sign\n";
  }
  CHECK_THROWS_AS(read_config_file(path.string()), ConfigError);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_config_file("/nonexistent/dyngeo.cfg"), ConfigError);
}

TEST_CASE("empty sweeps give empty reports") {
  RunConfig c;
  c.times.clear();
  CHECK(run_command("flow", c).checks.empty());
  CHECK(run_command("translocate", c).checks.empty());
  c.areas.clear();
  CHECK(run_command("holonomy", c).checks.empty());
  c.samples = 0;
  CHECK(run_command("check", c).checks.empty());
  CHECK(run_command("affine", c).checks.empty());
  c.phase_samples = 0;
  const auto r = run_command("phase", c);
  CHECK(r.checks.empty());
  CHECK(r.passed());
  CHECK(r.csv() == "check_id,eq_tag,residual,threshold,pass\n");
}

TEST_CASE("reports are byte-identical across runs") {
  RunConfig c;
  c.model = "hyperbolic-h2";
  c.samples = 2;
  const auto a = run_command("check", c).to_json().dump();
  const auto b = run_command("check", c).to_json().dump();
  CHECK(a == b);
  c.seed = 8;
  CHECK(run_command("check", c).to_json().dump() != a);
}

TEST_CASE("flat module suite passes") {
  RunConfig c;
  c.samples = 4;
  const auto r = run_command("check", c);
  CHECK(r.passed());
  CHECK(r.checks.size() > 10);
  for (const auto& rec : r.checks) CHECK_FALSE(rec.tag.empty());
}

TEST_CASE("per-check generators depend on id and seed only") {
  auto a = check_rng(7, "x"), b = check_rng(7, "x"), c = check_rng(7, "y"), d = check_rng(8, "x");
  const auto va = a();
  CHECK(va == b());
  CHECK(va != c());
  CHECK(va != d());
}

TEST_CASE("record combination") {
  const auto ok = below("a", "plumbing", 1e-9, 1e-8);
  const auto bad = below("b", "plumbing", 1e-7, 1e-8);
  const auto big = above("c", "plumbing", 2e-3, 1e-3);
  CHECK(ok.pass);
  CHECK_FALSE(bad.pass);
  CHECK(big.pass);
  CHECK(big.ratio() == doctest::Approx(0.5));
  const auto all = combine("all", "plumbing", {ok, bad, big});
  CHECK_FALSE(all.pass);
  CHECK(all.residual == doctest::Approx(10.0));
  CHECK(all.parts.size() == 3);
  CHECK(worst_of({ok, bad}).id == "b");
}

TEST_CASE("failing checks are reported, not thrown") {
  const auto recs = run_checks({{"boom", []() -> CheckRecord { throw DyngeoError("nope"); }},
                                {"fine", [] { return below("fine", "plumbing", 0.0, 1.0); }}},
                               false);
  REQUIRE(recs.size() == 2);
  CHECK_FALSE(recs[0].pass);
  CHECK(recs[0].inputs.contains("error"));
  CHECK(recs[1].pass);
}

TEST_CASE("reports are written with one file per table") {
  RunConfig c;
  c.model = "sphere-s2";
  c.areas = {0.04, 0.02};
  const auto r = run_command("holonomy", c);
  const auto dir = std::filesystem::temp_directory_path() / "dyngeo_unit_report";
  std::filesystem::remove_all(dir);
  const auto files = write_report(r, dir.string());
  CHECK(files.size() == 3);
  CHECK(std::filesystem::exists(dir / "holonomy_areas.csv"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("unknown command") {
  CHECK_THROWS_AS(run_command("dance", RunConfig{}), ConfigError);
}
