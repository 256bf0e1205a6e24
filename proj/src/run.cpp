#include "dyngeo/run.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/lexical_cast.hpp>

#include "dyngeo/errors.hpp"
#include "dyngeo/hamiltonian.hpp"
#include "dyngeo/manifold.hpp"

namespace dyngeo {

// ---- config ---------------------------------------------------------------

ModelPtr RunConfig::make_model() const {
  ModelParams p;
  p.n = n;
  p.radius = radius;
  p.cap = cap;
  return dyngeo::make_model(model, p);
}

EtherPtr RunConfig::make_field() const {
  EtherParams p;
  p.strategy = strategy;
  p.jet_order = jet_order;
  p.jet_radius = jet_radius;
  p.quad_panels = quad_panels;
  return make_ether_field(make_model(), p);
}

ode::Options RunConfig::ode_options() const {
  ode::Options o;
  o.abs_tol = abs_tol;
  o.rel_tol = rel_tol;
  return o;
}

fd::Steps RunConfig::fd_steps() const {
  fd::Steps s;
  s.first = fd_first;
  s.second = fd_second;
  return s;
}

std::string RunConfig::hamiltonian_name() const {
  if (!hamiltonian.empty()) return hamiltonian;
  if (model == "sphere-s2") return "sphere-height";
  if (model == "hyperbolic-h2") return "hyperbolic-quadratic";
  return "flat-oscillator";
}

ConfigMap read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  ConfigMap kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    boost::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = line.substr(0, eq), value = line.substr(eq + 1);
    boost::trim(key);
    boost::trim(value);
    if (key.empty()) throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
    kv[key] = value;
  }
  return kv;
}

namespace {

template <class T>
T parse_value(const std::string& key, const std::string& text) {
  try {
    return boost::lexical_cast<T>(text);
  } catch (const boost::bad_lexical_cast&) {
    throw ConfigError("bad value for '" + key + "': '" + text + "'");
  }
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::string trimmed = boost::trim_copy(text);
  if (trimmed.empty()) return out;
  std::vector<std::string> items;
  boost::split(items, trimmed, boost::is_any_of(","));
  for (auto& item : items) out.push_back(parse_value<double>(key, boost::trim_copy(item)));
  return out;
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string v = boost::to_lower_copy(text);
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError("bad value for '" + key + "': '" + text + "'");
}

void require_positive(const std::string& key, double v) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("'" + key + "' must be > 0");
}

}  // namespace

RunConfig make_config(const ConfigMap& kv) {
  RunConfig c;
  for (const auto& [key, value] : kv) {
    if (key == "model") c.model = value;
    else if (key == "n") c.n = parse_value<int>(key, value);
    else if (key == "radius") c.radius = parse_value<double>(key, value);
    else if (key == "cap") c.cap = parse_value<double>(key, value);
    else if (key == "strategy") {
      try {
        c.strategy = parse_strategy(value);
      } catch (const DyngeoError&) {
        throw ConfigError("bad value for 'strategy': '" + value + "'");
      }
    } else if (key == "jet_order") c.jet_order = parse_value<int>(key, value);
    else if (key == "jet_radius") c.jet_radius = parse_value<double>(key, value);
    else if (key == "quad_panels") c.quad_panels = parse_value<int>(key, value);
    else if (key == "hamiltonian") c.hamiltonian = value;
    else if (key == "coefficient") c.coefficient = parse_value<double>(key, value);
    else if (key == "abs_tol") c.abs_tol = parse_value<double>(key, value);
    else if (key == "rel_tol") c.rel_tol = parse_value<double>(key, value);
    else if (key == "fd_first") c.fd_first = parse_value<double>(key, value);
    else if (key == "fd_second") c.fd_second = parse_value<double>(key, value);
    else if (key == "areas") c.areas = parse_list(key, value);
    else if (key == "times") c.times = parse_list(key, value);
    else if (key == "samples") c.samples = parse_value<int>(key, value);
    else if (key == "phase_samples") c.phase_samples = parse_value<int>(key, value);
    else if (key == "seed") c.seed = parse_value<std::uint64_t>(key, value);
    else if (key == "output_dir") c.output_dir = value;
    else if (key == "suite") c.suite = value;
    else if (key == "timing") c.timing = parse_bool(key, value);
    else if (key == "family") c.family = value;
    else if (key == "m") c.m_entries = parse_list(key, value);
    else if (key == "vector_field") c.vector_field = value;
    else if (key == "l") c.l_entries = parse_list(key, value);
    else throw ConfigError("unknown config key '" + key + "'");
  }
  for (const auto& [k, v] : std::initializer_list<std::pair<const char*, double>>{
           {"radius", c.radius}, {"jet_radius", c.jet_radius}, {"abs_tol", c.abs_tol},
           {"rel_tol", c.rel_tol}, {"fd_first", c.fd_first}, {"fd_second", c.fd_second}}) {
    require_positive(k, v);
  }
  if (c.cap) require_positive("cap", *c.cap);
  if (c.n < 1) throw ConfigError("'n' must be >= 1");
  if (c.samples < 0 || c.phase_samples < 0) throw ConfigError("sample counts must be >= 0");
  if (c.quad_panels < 1) throw ConfigError("'quad_panels' must be >= 1");
  if (c.jet_order < 1 || c.jet_order > 3) throw ConfigError("'jet_order' must be 1, 2 or 3");
  for (double a : c.areas) require_positive("areas", a);
  for (double t : c.times) {
    if (!std::isfinite(t)) throw ConfigError("'times' must be finite");
  }
  if (c.suite != "module" && c.suite != "acceptance") {
    throw ConfigError("'suite' must be 'module' or 'acceptance'");
  }
  if (c.family != "reflections" && c.family != "linear") {
    throw ConfigError("'family' must be 'reflections' or 'linear'");
  }
  if (c.vector_field != "linear" && c.vector_field != "rotation") {
    throw ConfigError("'vector_field' must be 'linear' or 'rotation'");
  }
  try {
    c.make_model();
  } catch (const ConfigError&) {
    throw;
  } catch (const DyngeoError& e) {
    throw ConfigError(e.what());
  }
  const auto names = hamiltonian_names();
  if (!c.hamiltonian.empty() && std::find(names.begin(), names.end(), c.hamiltonian) == names.end()) {
    throw ConfigError("unknown hamiltonian '" + c.hamiltonian + "'");
  }
  return c;
}

nlohmann::json config_json(const RunConfig& c) {
  nlohmann::json j;
  j["model"] = c.model;
  j["n"] = c.n;
  j["radius"] = c.radius;
  j["cap"] = c.cap ? nlohmann::json(*c.cap) : nlohmann::json(nullptr);
  j["strategy"] = c.strategy ? nlohmann::json(to_string(*c.strategy)) : nlohmann::json("default");
  j["jet_order"] = c.jet_order;
  j["jet_radius"] = c.jet_radius;
  j["quad_panels"] = c.quad_panels;
  j["hamiltonian"] = c.hamiltonian_name();
  j["coefficient"] = c.coefficient;
  j["abs_tol"] = c.abs_tol;
  j["rel_tol"] = c.rel_tol;
  j["fd_first"] = c.fd_first;
  j["fd_second"] = c.fd_second;
  j["areas"] = c.areas;
  j["times"] = c.times;
  j["samples"] = c.samples;
  j["phase_samples"] = c.phase_samples;
  j["seed"] = c.seed;
  j["suite"] = c.suite;
  j["family"] = c.family;
  j["m"] = c.m_entries;
  j["vector_field"] = c.vector_field;
  j["l"] = c.l_entries;
  return j;
}

std::mt19937_64 check_rng(std::uint64_t seed, const std::string& id) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : id) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
  return std::mt19937_64(seq);
}

// ---- records --------------------------------------------------------------

double CheckRecord::ratio() const {
  if (!std::isfinite(residual)) return std::numeric_limits<double>::infinity();
  if (at_least) {
    return residual > 0.0 ? threshold / residual : std::numeric_limits<double>::infinity();
  }
  return residual / threshold;
}

CheckRecord below(std::string id, std::string tag, double residual, double threshold,
                  nlohmann::json inputs) {
  CheckRecord r;
  r.id = std::move(id);
  r.tag = std::move(tag);
  r.inputs = std::move(inputs);
  r.residual = residual;
  r.threshold = threshold;
  r.pass = std::isfinite(residual) && residual < threshold;
  return r;
}

CheckRecord above(std::string id, std::string tag, double value, double threshold,
                  nlohmann::json inputs) {
  CheckRecord r;
  r.id = std::move(id);
  r.tag = std::move(tag);
  r.inputs = std::move(inputs);
  r.residual = value;
  r.threshold = threshold;
  r.at_least = true;
  r.pass = std::isfinite(value) && value >= threshold;
  return r;
}

CheckRecord combine(std::string id, std::string tag, std::vector<CheckRecord> parts) {
  CheckRecord r;
  r.id = std::move(id);
  r.tag = std::move(tag);
  r.threshold = 1.0;
  r.pass = true;
  for (const auto& p : parts) {
    r.residual = std::max(r.residual, p.ratio());
    r.pass = r.pass && p.pass;
  }
  r.parts = std::move(parts);
  return r;
}

CheckRecord worst_of(std::vector<CheckRecord> records) {
  if (records.empty()) throw InvalidArgument("worst_of: no records");
  std::size_t w = 0;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const bool fail_i = !records[i].pass, fail_w = !records[w].pass;
    if ((fail_i && !fail_w) || (fail_i == fail_w && records[i].ratio() > records[w].ratio())) w = i;
  }
  auto out = records[w];
  out.inputs["evaluations"] = records.size();
  return out;
}

// ---- report ---------------------------------------------------------------

namespace {

nlohmann::json number(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(v > 0 ? "inf" : (v < 0 ? "-inf" : "nan"));
}

nlohmann::json record_json(const CheckRecord& r) {
  nlohmann::json j;
  j["id"] = r.id;
  j["eq_tag"] = r.tag;
  j["inputs"] = r.inputs;
  j["residual"] = number(r.residual);
  j["threshold"] = r.threshold;
  j["comparison"] = r.at_least ? ">=" : "<";
  j["pass"] = r.pass;
  if (r.seconds) j["wall_time_s"] = *r.seconds;
  if (!r.parts.empty()) {
    j["parts"] = nlohmann::json::array();
    for (const auto& p : r.parts) j["parts"].push_back(record_json(p));
  }
  return j;
}

std::string fmt(double v) {
  if (!std::isfinite(v)) return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

void csv_rows(const CheckRecord& r, const std::string& prefix, std::ostringstream& out) {
  const std::string id = prefix.empty() ? r.id : prefix + "/" + r.id;
  out << id << ',' << r.tag << ',' << fmt(r.residual) << ',' << fmt(r.threshold) << ','
      << (r.pass ? "true" : "false") << '\n';
  for (const auto& p : r.parts) csv_rows(p, id, out);
}

}  // namespace

std::string Table::csv() const {
  std::ostringstream out;
  out << boost::join(columns, ",") << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << fmt(row[i]);
    out << '\n';
  }
  return out.str();
}

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

nlohmann::json Report::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["config"] = config;
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks) j["checks"].push_back(record_json(c));
  j["passed"] = passed();
  j["tables"] = nlohmann::json::object();
  for (const auto& t : tables) {
    nlohmann::json tj;
    tj["columns"] = t.columns;
    tj["rows"] = t.rows;
    j["tables"][t.name] = tj;
  }
  return j;
}

std::string Report::csv() const {
  std::ostringstream out;
  out << "check_id,eq_tag,residual,threshold,pass\n";
  for (const auto& c : checks) csv_rows(c, "", out);
  return out.str();
}

std::vector<const CheckRecord*> Report::worst(std::size_t count) const {
  std::vector<const CheckRecord*> failing;
  for (const auto& c : checks)
    if (!c.pass) failing.push_back(&c);
  std::stable_sort(failing.begin(), failing.end(),
                   [](const auto* a, const auto* b) { return a->ratio() > b->ratio(); });
  if (failing.size() > count) failing.resize(count);
  return failing;
}

std::vector<CheckRecord> run_checks(const std::vector<NamedCheck>& checks, bool timing) {
  std::vector<CheckRecord> out(checks.size());
  const long n = static_cast<long>(checks.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckRecord r;
    try {
      r = checks[i].fn();
    } catch (const std::exception& e) {
      r = below(checks[i].id, "plumbing", std::numeric_limits<double>::infinity(), 0.0);
      r.inputs["error"] = e.what();
    }
    r.id = checks[i].id;
    if (timing) {
      r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    out[i] = std::move(r);
  }
  return out;
}

std::vector<std::string> write_report(const Report& report, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::vector<std::string> written;
  auto put = [&](const std::string& name, const std::string& text) {
    const auto path = (fs::path(dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DyngeoError("cannot write '" + path + "'");
    out << text;
    written.push_back(path);
  };
  put(report.command + ".json", report.to_json().dump(2) + "\n");
  put(report.command + ".csv", report.csv());
  for (const auto& t : report.tables) put(report.command + "_" + t.name + ".csv", t.csv());
  return written;
}

}  // namespace dyngeo
