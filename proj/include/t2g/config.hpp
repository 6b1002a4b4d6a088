#pragma once

// Text config for the CLI: "[section]" headers with "key = value" lines (or
// fully dotted keys). Lists are comma-separated. Unknown keys are errors
// naming the key; cross-field violations surface as ConfigError citing the
// underlying module precondition.

#include <optional>
#include <string>
#include <vector>

#include "t2g/harness.hpp"

namespace t2g {

struct RunConfig {
  // [graph]
  std::vector<double> lengths;
  std::vector<double> angles;  // default: equally spaced 2*pi*j/N

  // [domain]
  double eps = 0.1;
  double eps0 = 0.25;
  double l = 1.0;
  double a = 0.0;  // <= 0: default rule

  // [potential] — absent section means the free Laplacian
  bool has_potential = false;
  std::string profile = "cosine";
  double rho = 0.8;
  double v0 = 0.0;
  std::optional<double> coupling_target;  // potential.C_V_target

  // [solver]
  double h = 0.0;  // 0: eps/4
  int layers = 0;  // 0: round(2*eps/h)
  int modes = 6;
  double tol = 1e-8;
  double k_max = 0.0;

  // [harness]
  std::vector<double> eps_sweep{0.2, 0.1, 0.05};
  double h_factor = 0.25;
  int threads = 1;
  int samples = GraphFunction::kDefaultSamples;
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);

// Single "section.key" override (CLI flags route through this).
void apply_override(RunConfig& cfg, const std::string& key, const std::string& value);

// Fills defaults (angles, h) and validates cross-field constraints by
// attempting the underlying constructions; throws ConfigError.
void validate_config(RunConfig& cfg);

MetricStarGraph config_graph(const RunConfig& cfg);
std::optional<PotentialSpec> config_potential(const RunConfig& cfg);
HarnessConfig config_harness(const RunConfig& cfg);

}  // namespace t2g
