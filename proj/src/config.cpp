#include "t2g/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace t2g {

namespace {

std::string trim(const std::string& s) {
  const size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size())
    throw ConfigError("config key '" + key + "': '" + value + "' is not a number");
  return x;
}

int parse_int(const std::string& key, const std::string& value) {
  const double x = parse_double(key, value);
  if (x != std::floor(x) || std::abs(x) > 1e9)
    throw ConfigError("config key '" + key + "': '" + value + "' is not an integer");
  return static_cast<int>(x);
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
  if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
  return out;
}

}  // namespace

void apply_override(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "graph.lengths") {
    cfg.lengths = parse_list(key, value);
  } else if (key == "graph.angles") {
    cfg.angles = parse_list(key, value);
  } else if (key == "domain.eps") {
    cfg.eps = parse_double(key, value);
  } else if (key == "domain.eps0") {
    cfg.eps0 = parse_double(key, value);
  } else if (key == "domain.l") {
    cfg.l = parse_double(key, value);
  } else if (key == "domain.a") {
    cfg.a = parse_double(key, value);
  } else if (key == "potential.profile") {
    const std::string v = trim(value);
    if (v != "cosine" && v != "box")
      throw ConfigError("config key 'potential.profile': '" + v + "' is not cosine or box");
    cfg.profile = v;
    cfg.has_potential = true;
  } else if (key == "potential.rho") {
    cfg.rho = parse_double(key, value);
    cfg.has_potential = true;
  } else if (key == "potential.v0") {
    cfg.v0 = parse_double(key, value);
    cfg.has_potential = true;
  } else if (key == "potential.C_V_target") {
    cfg.coupling_target = parse_double(key, value);
    cfg.has_potential = true;
  } else if (key == "solver.h") {
    cfg.h = parse_double(key, value);
  } else if (key == "solver.layers") {
    cfg.layers = parse_int(key, value);
  } else if (key == "solver.modes") {
    cfg.modes = parse_int(key, value);
  } else if (key == "solver.tol") {
    cfg.tol = parse_double(key, value);
  } else if (key == "solver.k_max") {
    cfg.k_max = parse_double(key, value);
  } else if (key == "harness.eps_sweep") {
    cfg.eps_sweep = parse_list(key, value);
  } else if (key == "harness.h_factor") {
    cfg.h_factor = parse_double(key, value);
  } else if (key == "harness.threads") {
    cfg.threads = parse_int(key, value);
  } else if (key == "harness.samples") {
    cfg.samples = parse_int(key, value);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::stringstream ss(text);
  std::string raw;
  std::string section;
  int lineno = 0;
  while (std::getline(ss, raw)) {
    ++lineno;
    const size_t hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "graph" && section != "domain" && section != "potential" &&
          section != "solver" && section != "harness")
        throw ConfigError("unknown config section '" + section + "'");
      if (section == "potential") cfg.has_potential = true;
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.find('.') == std::string::npos) {
      if (section.empty())
        throw ConfigError("config line " + std::to_string(lineno) + ": key '" + key +
                          "' outside any section");
      key = section + "." + key;
    }
    apply_override(cfg, key, value);
  }
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

MetricStarGraph config_graph(const RunConfig& cfg) {
  std::vector<double> angles = cfg.angles;
  if (angles.empty()) {
    const int n = static_cast<int>(cfg.lengths.size());
    for (int j = 0; j < n; ++j) angles.push_back(2.0 * M_PI * j / n);
  }
  return build_star(cfg.lengths, angles);
}

std::optional<PotentialSpec> config_potential(const RunConfig& cfg) {
  if (!cfg.has_potential) return std::nullopt;
  PotentialSpec V;
  V.profile = cfg.profile == "box" ? PotentialProfile::Box : PotentialProfile::CosineBump;
  V.rho = cfg.rho;
  if (cfg.coupling_target) {
    if (cfg.v0 != 0.0)
      throw ConfigError("give potential.v0 or potential.C_V_target, not both");
    V.v0 = solve_amplitude(V.profile, V.rho, *cfg.coupling_target);
  } else {
    V.v0 = cfg.v0;
  }
  return V;
}

void validate_config(RunConfig& cfg) {
  if (cfg.lengths.empty()) throw ConfigError("graph.lengths is required");
  if (!cfg.angles.empty() && cfg.angles.size() != cfg.lengths.size())
    throw ConfigError("graph.angles must match graph.lengths in size");
  if (!(cfg.eps > 0.0)) throw ConfigError("domain.eps must be positive");
  if (cfg.h == 0.0) cfg.h = cfg.eps / 4.0;
  if (!(cfg.h > 0.0)) throw ConfigError("solver.h must be positive");
  if (cfg.modes < 1) throw ConfigError("solver.modes must be at least 1");
  if (!(cfg.tol > 0.0)) throw ConfigError("solver.tol must be positive");
  if (cfg.layers < 0) throw ConfigError("solver.layers must be nonnegative");
  if (cfg.eps_sweep.empty()) throw ConfigError("harness.eps_sweep must be nonempty");
  for (double e : cfg.eps_sweep)
    if (!(e > 0.0)) throw ConfigError("harness.eps_sweep values must be positive");
  if (!(cfg.h_factor > 0.0) || cfg.h_factor > 1.0)
    throw ConfigError("harness.h_factor must lie in (0, 1]");
  if (cfg.threads < 1) throw ConfigError("harness.threads must be at least 1");
  if (cfg.samples < 2) throw ConfigError("harness.samples must be at least 2");

  MetricStarGraph G;
  try {
    G = config_graph(cfg);
  } catch (const DomainError& ex) {
    throw ConfigError(std::string("graph: ") + ex.what());
  }

  std::optional<PotentialSpec> V;
  try {
    V = config_potential(cfg);
    if (V) {
      cfg.v0 = V->v0;  // resolved amplitude replaces C_V_target
      cfg.coupling_target.reset();
      if (coupling_constant(*V) < 0.0)
        throw DomainError("potential coupling constant must be nonnegative");
    }
  } catch (const std::runtime_error& ex) {
    if (dynamic_cast<const ConfigError*>(&ex)) throw;
    throw ConfigError(std::string("potential: ") + ex.what());
  }

  // The thin-domain constructor owns the geometric cross-field constraints
  // (eps <= eps0, eps0*l < min length, junction admissibility, constant a).
  std::vector<double> eps_values = cfg.eps_sweep;
  eps_values.push_back(cfg.eps);
  for (double e : eps_values) {
    try {
      const ThinDomainSpec spec = build_thin_domain(G, e, cfg.eps0, cfg.l, std::nullopt, cfg.a);
      if (V) validate_potential_support(*V, spec);
    } catch (const std::runtime_error& ex) {
      throw ConfigError("eps = " + std::to_string(e) + ": " + ex.what());
    }
  }
  if (cfg.h > cfg.eps)
    throw ConfigError("solver.h must not exceed domain.eps (mesh needs >= 1 column per tube)");
}

HarnessConfig config_harness(const RunConfig& cfg) {
  HarnessConfig h;
  h.graph = config_graph(cfg);
  h.eps0 = cfg.eps0;
  h.l = cfg.l;
  h.a = cfg.a;
  h.eps_list = cfg.eps_sweep;
  h.h_factor = cfg.h_factor;
  h.layers = cfg.layers;
  h.potential = config_potential(cfg);
  h.modes = cfg.modes;
  h.tol = cfg.tol;
  h.samples = cfg.samples;
  h.threads = cfg.threads;
  return h;
}

}  // namespace t2g
