// thin2graph command-line front end.
//
// Subcommands: graph-spectrum, thin-spectrum, converge, recovery-check,
// project, mesh-export. Exit codes: 0 success, 1 invalid input or
// configuration, 2 numerical/solver failure. All file outputs are written
// atomically (temp file + rename) and are byte-identical across runs with
// the same inputs.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "t2g/config.hpp"
#include "t2g/harness.hpp"

namespace {

using namespace t2g;

std::string fmt15(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open '" + tmp + "' for writing");
    out << content;
    out.flush();
    if (!out) throw ConfigError("failed writing '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw ConfigError("cannot move '" + tmp + "' to '" + path + "': " + ec.message());
}

// Write to the file when a path is given, else to stdout.
void emit(const std::string& path, const std::string& content) {
  if (path.empty())
    std::cout << content;
  else
    write_atomic(path, content);
}

std::vector<double> parse_csv_doubles(const std::string& flag, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      out.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(flag + ": '" + item + "' is not a number");
    }
  }
  if (out.empty()) throw ConfigError(flag + ": empty list");
  return out;
}

struct ConfigArgs {
  std::string path;
  std::vector<std::string> overrides;  // key=value

  RunConfig load() const {
    RunConfig cfg = path.empty() ? RunConfig{} : parse_config(path);
    for (const std::string& kv : overrides) {
      const size_t eq = kv.find('=');
      if (eq == std::string::npos)
        throw ConfigError("--set expects key=value, got '" + kv + "'");
      apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    return cfg;
  }
};

void add_config_options(CLI::App* cmd, ConfigArgs& args, bool required) {
  auto* opt = cmd->add_option("-c,--config", args.path, "structured text config file");
  if (required) opt->required();
  cmd->add_option("--set", args.overrides, "override a config key (section.key=value)");
}

int solver_layers(const RunConfig& cfg) {
  if (cfg.layers > 0) return cfg.layers;
  return std::max(2, static_cast<int>(std::lround(2.0 * cfg.eps / cfg.h)));
}

// --- graph-spectrum ---------------------------------------------------------

struct GraphSpectrumArgs {
  std::string lengths, angles, output;
  double cv = 0.0, kmax = 0.0;
  int modes = 6;
};

int run_graph_spectrum(const GraphSpectrumArgs& a) {
  const std::vector<double> lengths = parse_csv_doubles("--lengths", a.lengths);
  std::vector<double> angles;
  if (a.angles.empty())
    for (size_t j = 0; j < lengths.size(); ++j)
      angles.push_back(2.0 * M_PI * j / lengths.size());
  else
    angles = parse_csv_doubles("--angles", a.angles);
  const MetricStarGraph G = build_star(lengths, angles);

  SecularSolveConfig scfg;
  scfg.max_pairs = a.modes;
  scfg.k_max = a.kmax;
  const std::vector<GraphEigenpair> pairs = secular_eigenvalues(G, a.cv, scfg);

  std::string csv = "index,lambda,multiplicity,k\n";
  int index = 0;
  for (const GraphEigenpair& p : pairs)
    for (int i = 0; i < p.multiplicity && index < a.modes; ++i, ++index)
      csv += std::to_string(index) + "," + fmt15(p.lambda) + "," +
             std::to_string(p.multiplicity) + "," + fmt15(p.k) + "\n";
  emit(a.output, csv);
  return 0;
}

// --- thin-spectrum ----------------------------------------------------------

int run_thin_spectrum(const ConfigArgs& cargs, const std::string& output) {
  RunConfig cfg = cargs.load();
  validate_config(cfg);
  const MetricStarGraph G = config_graph(cfg);
  const std::optional<PotentialSpec> V = config_potential(cfg);
  const ThinDomainSpec spec = build_thin_domain(G, cfg.eps, cfg.eps0, cfg.l, std::nullopt, cfg.a);
  if (V) validate_potential_support(*V, spec);
  const Mesh2D mesh = triangulate(spec, cfg.h, solver_layers(cfg));
  validate_mesh(mesh);
  const AssembledForms forms = assemble(mesh, spec, V ? &*V : nullptr);
  const EigenResult res = solve_gevp(sparse_sum(forms.K, forms.P), forms.M, cfg.modes, cfg.tol);

  std::string csv = "index,lambda,residual\n";
  for (int i = 0; i < res.eigenvalues.size(); ++i)
    csv += std::to_string(i) + "," + fmt15(res.eigenvalues[i]) + "," + fmt15(res.residuals[i]) +
           "\n";
  emit(output, csv);
  return 0;
}

// --- converge ---------------------------------------------------------------

int run_converge(const ConfigArgs& cargs, const std::string& out_dir, bool plot_data,
                 int threads) {
  RunConfig cfg = cargs.load();
  if (threads > 0) cfg.threads = threads;
  validate_config(cfg);
  const HarnessConfig hc = config_harness(cfg);
  const ConvergenceReport report = run_convergence(hc);

  std::filesystem::create_directories(out_dir);
  const auto in_dir = [&](const std::string& name) {
    return (std::filesystem::path(out_dir) / name).string();
  };
  write_atomic(in_dir("report.csv"), report_to_csv(report));
  write_atomic(in_dir("report.json"), report_to_json(report));
  std::cout << "wrote " << in_dir("report.csv") << "\n";
  std::cout << "wrote " << in_dir("report.json") << "\n";
  if (plot_data)
    for (const auto& [name, body] : report_plot_data(report)) {
      write_atomic(in_dir(name), body);
      std::cout << "wrote " << in_dir(name) << "\n";
    }

  bool any_failed = false;
  for (const ReportRow& r : report.rows)
    if (!r.ok) {
      std::cerr << "error: eps = " << fmt15(r.eps) << ": " << r.error << "\n";
      any_failed = true;
    }
  return any_failed ? 2 : 0;
}

// --- recovery-check ---------------------------------------------------------

int run_recovery_check(const ConfigArgs& cargs, const std::string& output) {
  RunConfig cfg = cargs.load();
  validate_config(cfg);
  const MetricStarGraph G = config_graph(cfg);
  const std::optional<PotentialSpec> V = config_potential(cfg);
  const double coupling = V ? coupling_constant(*V) : 0.0;

  // Test function of the recovery construction: psi_j(s) = 1 - s / l_j,
  // continuous at O with psi(O) = 1.
  const GraphFunction psi = sample_function(
      G, [&](int j, double s) { return Complex(1.0 - s / G.lengths[j], 0.0); }, Complex(1.0, 0.0),
      cfg.samples);

  std::vector<double> eps = cfg.eps_sweep;
  std::sort(eps.rbegin(), eps.rend());
  std::string csv =
      "eps,phi_v,phi_v_target,phi_v_err,phi_k,phi_k_target,phi_k_err,l2_gap\n";
  for (double e : eps) {
    const ThinDomainSpec spec = build_thin_domain(G, e, cfg.eps0, cfg.l, std::nullopt, cfg.a);
    if (V) validate_potential_support(*V, spec);
    const int layers =
        cfg.layers > 0 ? cfg.layers : std::max(2, (int)std::lround(2.0 / cfg.h_factor));
    const Mesh2D mesh = triangulate(spec, cfg.h_factor * e, layers);
    const AssembledForms forms = assemble(mesh, spec, V ? &*V : nullptr);

    const DiscreteField u = recovery_sequence(psi, spec, mesh);
    const FormParts parts = form_values(u, forms);
    const double phi_v_target = coupling;  // |psi(O)|^2 = 1
    double phi_k_target = 0.0;
    for (double lj : G.lengths) phi_k_target += 1.0 / (lj - spec.mouth_position());

    const DiscreteField diff = u - pullback(psi, spec, mesh);
    const double l2_gap = std::sqrt(std::max(0.0, forms.M.quadratic_form(diff)));

    csv += fmt15(e) + "," + fmt15(parts.potential) + "," + fmt15(phi_v_target) + "," +
           fmt15(std::abs(parts.potential - phi_v_target)) + "," + fmt15(parts.kinetic) + "," +
           fmt15(phi_k_target) + "," + fmt15(std::abs(parts.kinetic - phi_k_target)) + "," +
           fmt15(l2_gap) + "\n";
  }
  emit(output, csv);
  return 0;
}

// --- project ----------------------------------------------------------------

int run_project(const ConfigArgs& cargs, const std::string& points_path,
                const std::string& output) {
  RunConfig cfg = cargs.load();
  validate_config(cfg);
  const ThinDomainSpec spec =
      build_thin_domain(config_graph(cfg), cfg.eps, cfg.eps0, cfg.l, std::nullopt, cfg.a);

  std::vector<Vec2> points;
  std::istream* in = &std::cin;
  std::ifstream file;
  if (!points_path.empty()) {
    file.open(points_path);
    if (!file) throw ConfigError("cannot read points file '" + points_path + "'");
    in = &file;
  }
  std::string line;
  int lineno = 0;
  while (std::getline(*in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::stringstream ss(line);
    double x, y;
    if (!(ss >> x)) continue;  // blank/comment line
    if (!(ss >> y))
      throw ConfigError("points line " + std::to_string(lineno) + ": expected 'x y'");
    points.emplace_back(x, y);
  }

  std::string csv = "x,y,edge,s\n";
  for (const Vec2& p : points) {
    const GraphPoint g = project_to_graph(p, spec);
    csv += fmt15(p.x()) + "," + fmt15(p.y()) + "," + std::to_string(g.edge) + "," + fmt15(g.s) +
           "\n";
  }
  emit(output, csv);
  return 0;
}

// --- mesh-export ------------------------------------------------------------

int run_mesh_export(const ConfigArgs& cargs, const std::string& output) {
  RunConfig cfg = cargs.load();
  validate_config(cfg);
  const ThinDomainSpec spec =
      build_thin_domain(config_graph(cfg), cfg.eps, cfg.eps0, cfg.l, std::nullopt, cfg.a);
  const Mesh2D mesh = triangulate(spec, cfg.h, solver_layers(cfg));
  validate_mesh(mesh);
  emit(output, mesh_to_text(mesh));
  const MeshQuality q = mesh_quality(mesh);
  std::cerr << mesh.node_count() << " nodes, " << mesh.tri_count()
            << " triangles, min angle " << fmt15(q.min_angle_deg) << " deg\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"thin-domain to quantum-graph spectral convergence toolkit"};
  app.require_subcommand(1);

  GraphSpectrumArgs gs;
  CLI::App* gs_cmd = app.add_subcommand(
      "graph-spectrum", "eigenvalues of the star-graph operator (secular equation)");
  gs_cmd->add_option("--lengths", gs.lengths, "edge lengths, comma-separated")->required();
  gs_cmd->add_option("--angles", gs.angles, "edge angles in radians (default: equally spaced)");
  gs_cmd->add_option("--cv", gs.cv, "delta coupling strength at the junction");
  gs_cmd->add_option("--modes", gs.modes, "number of eigenvalues");
  gs_cmd->add_option("--kmax", gs.kmax, "wavenumber cutoff (0: automatic)");
  gs_cmd->add_option("-o,--output", gs.output, "output CSV path (default: stdout)");

  ConfigArgs ts_cfg;
  std::string ts_out;
  double ts_eps = 0.0, ts_h = 0.0, ts_tol = 0.0;
  int ts_modes = 0;
  CLI::App* ts_cmd =
      app.add_subcommand("thin-spectrum", "FEM eigenvalues of one thin star domain");
  ts_cmd->set_help_flag("--help", "print this help message and exit");  // frees -h for --h
  add_config_options(ts_cmd, ts_cfg, true);
  ts_cmd->add_option("--eps", ts_eps, "half-width of the tubes");
  ts_cmd->add_option("--h", ts_h, "target mesh size (default: eps/4)");
  ts_cmd->add_option("--modes", ts_modes, "number of eigenvalues");
  ts_cmd->add_option("--tol", ts_tol, "eigensolver residual tolerance");
  ts_cmd->add_option("-o,--output", ts_out, "output CSV path (default: stdout)");

  ConfigArgs cv_cfg;
  std::string cv_dir = ".";
  bool cv_plot = false;
  int cv_threads = 0;
  CLI::App* cv_cmd =
      app.add_subcommand("converge", "eps-sweep convergence study against the graph limit");
  add_config_options(cv_cmd, cv_cfg, true);
  cv_cmd->add_option("--out-dir", cv_dir, "directory for report.csv / report.json");
  cv_cmd->add_flag("--plot-data", cv_plot, "also write two-column .dat files per diagnostic");
  cv_cmd->add_option("--threads", cv_threads, "rows computed concurrently");

  ConfigArgs rc_cfg;
  std::string rc_out;
  CLI::App* rc_cmd = app.add_subcommand(
      "recovery-check", "recovery-sequence energy identities over the eps sweep");
  add_config_options(rc_cmd, rc_cfg, true);
  rc_cmd->add_option("-o,--output", rc_out, "output CSV path (default: stdout)");

  ConfigArgs pj_cfg;
  std::string pj_points, pj_out;
  CLI::App* pj_cmd =
      app.add_subcommand("project", "project plane points onto the graph (x y per line)");
  add_config_options(pj_cmd, pj_cfg, true);
  pj_cmd->add_option("--points", pj_points, "points file (default: stdin)");
  pj_cmd->add_option("-o,--output", pj_out, "output CSV path (default: stdout)");

  ConfigArgs me_cfg;
  std::string me_out;
  CLI::App* me_cmd = app.add_subcommand("mesh-export", "triangulate and write the mesh as text");
  add_config_options(me_cmd, me_cfg, true);
  me_cmd->add_option("-o,--output", me_out, "output mesh path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (gs_cmd->parsed()) return run_graph_spectrum(gs);
    if (ts_cmd->parsed()) {
      if (ts_eps > 0.0) ts_cfg.overrides.push_back("domain.eps=" + fmt15(ts_eps));
      if (ts_h > 0.0) ts_cfg.overrides.push_back("solver.h=" + fmt15(ts_h));
      if (ts_modes > 0) ts_cfg.overrides.push_back("solver.modes=" + std::to_string(ts_modes));
      if (ts_tol > 0.0) ts_cfg.overrides.push_back("solver.tol=" + fmt15(ts_tol));
      return run_thin_spectrum(ts_cfg, ts_out);
    }
    if (cv_cmd->parsed()) return run_converge(cv_cfg, cv_dir, cv_plot, cv_threads);
    if (rc_cmd->parsed()) return run_recovery_check(rc_cfg, rc_out);
    if (pj_cmd->parsed()) return run_project(pj_cfg, pj_points, pj_out);
    if (me_cmd->parsed()) return run_mesh_export(me_cfg, me_out);
  } catch (const SolverError& ex) {
    std::cerr << "solver error: " << ex.what() << "\n";
    return 2;
  } catch (const NumericsError& ex) {
    std::cerr << "numerics error: " << ex.what() << "\n";
    return 2;
  } catch (const std::runtime_error& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  } catch (const std::exception& ex) {
    std::cerr << "internal error: " << ex.what() << "\n";
    return 2;
  }
  return 0;
}
