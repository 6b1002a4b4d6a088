// Python bindings for the main pipeline operations. Heavy objects stay on
// the C++ side; results cross as plain lists, numpy arrays and JSON text.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "t2g/config.hpp"
#include "t2g/harness.hpp"

namespace py = pybind11;
using namespace t2g;

namespace {

MetricStarGraph make_graph(const std::vector<double>& lengths,
                           const std::optional<std::vector<double>>& angles) {
  std::vector<double> a;
  if (angles) {
    a = *angles;
  } else {
    for (size_t j = 0; j < lengths.size(); ++j)
      a.push_back(2.0 * M_PI * j / lengths.size());
  }
  return build_star(lengths, a);
}

RunConfig load_config(const std::string& text) {
  RunConfig cfg = parse_config_text(text);
  validate_config(cfg);
  return cfg;
}

struct ThinSetup {
  RunConfig cfg;
  ThinDomainSpec spec;
  std::optional<PotentialSpec> V;
  Mesh2D mesh;
};

ThinSetup thin_setup(const std::string& config_text) {
  ThinSetup s{load_config(config_text), {}, {}, {}};
  s.spec = build_thin_domain(config_graph(s.cfg), s.cfg.eps, s.cfg.eps0, s.cfg.l, std::nullopt,
                             s.cfg.a);
  s.V = config_potential(s.cfg);
  if (s.V) validate_potential_support(*s.V, s.spec);
  const int layers = s.cfg.layers > 0
                         ? s.cfg.layers
                         : std::max(2, (int)std::lround(2.0 * s.cfg.eps / s.cfg.h));
  s.mesh = triangulate(s.spec, s.cfg.h, layers);
  validate_mesh(s.mesh);
  return s;
}

}  // namespace

PYBIND11_MODULE(_thin2graph, m) {
  m.doc() = "thin-domain to quantum-graph spectral convergence toolkit";
  m.attr("__version__") = "0.1.0";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<GeometryError>(m, "GeometryError", PyExc_ValueError);
  py::register_exception<MeshError>(m, "MeshError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
  py::register_exception<NumericsError>(m, "NumericsError", PyExc_RuntimeError);

  m.def(
      "graph_spectrum",
      [](const std::vector<double>& lengths, std::optional<std::vector<double>> angles,
         double coupling, int modes) {
        SecularSolveConfig scfg;
        scfg.max_pairs = modes;
        const auto pairs = secular_eigenvalues(make_graph(lengths, angles), coupling, scfg);
        std::vector<std::tuple<double, int, double>> out;
        for (const GraphEigenpair& p : pairs)
          for (int i = 0; i < p.multiplicity && (int)out.size() < modes; ++i)
            out.emplace_back(p.lambda, p.multiplicity, p.k);
        return out;
      },
      py::arg("lengths"), py::arg("angles") = std::nullopt, py::arg("coupling") = 0.0,
      py::arg("modes") = 8,
      "star-graph eigenvalues by the secular equation; returns (lambda, multiplicity, k) rows");

  m.def(
      "graph_fem_spectrum",
      [](const std::vector<double>& lengths, std::optional<std::vector<double>> angles,
         double coupling, double h, int modes) {
        return graph_fem_eigenvalues(make_graph(lengths, angles), coupling, h, modes);
      },
      py::arg("lengths"), py::arg("angles") = std::nullopt, py::arg("coupling") = 0.0,
      py::arg("h") = 1e-3, py::arg("modes") = 8,
      "independent 1-D FEM eigenvalues of the same graph operator");

  m.def(
      "thin_spectrum",
      [](const std::string& config_text) {
        const ThinSetup s = thin_setup(config_text);
        const AssembledForms forms = assemble(s.mesh, s.spec, s.V ? &*s.V : nullptr);
        const EigenResult r =
            solve_gevp(sparse_sum(forms.K, forms.P), forms.M, s.cfg.modes, s.cfg.tol);
        return std::make_pair(r.eigenvalues, r.residuals);
      },
      py::arg("config_text"),
      "thin-domain FEM eigenvalues for a structured-text config; returns (lambdas, residuals)");

  m.def(
      "converge_json",
      [](const std::string& config_text) {
        const RunConfig cfg = load_config(config_text);
        return report_to_json(run_convergence(config_harness(cfg)));
      },
      py::arg("config_text"), "run the eps-sweep convergence study; returns the JSON report");

  m.def(
      "mesh_info",
      [](const std::string& config_text) {
        const ThinSetup s = thin_setup(config_text);
        const MeshQuality q = mesh_quality(s.mesh);
        py::dict d;
        d["nodes"] = q.n_nodes;
        d["triangles"] = q.n_tris;
        d["min_angle_deg"] = q.min_angle_deg;
        d["max_aspect"] = q.max_aspect;
        return d;
      },
      py::arg("config_text"), "triangulate and report mesh size/quality");

  m.def(
      "mesh_text",
      [](const std::string& config_text) { return mesh_to_text(thin_setup(config_text).mesh); },
      py::arg("config_text"), "triangulate and export the mesh in the plain-text format");

  m.def(
      "project_points",
      [](const std::string& config_text, const Eigen::MatrixXd& points) {
        if (points.cols() != 2) throw DomainError("points must be an (n, 2) array");
        const RunConfig cfg = load_config(config_text);
        const ThinDomainSpec spec = build_thin_domain(config_graph(cfg), cfg.eps, cfg.eps0,
                                                      cfg.l, std::nullopt, cfg.a);
        std::vector<std::pair<int, double>> out;
        for (Eigen::Index i = 0; i < points.rows(); ++i) {
          const GraphPoint g = project_to_graph(Vec2(points(i, 0), points(i, 1)), spec);
          out.emplace_back(g.edge, g.s);
        }
        return out;
      },
      py::arg("config_text"), py::arg("points"),
      "project plane points onto the graph; returns (edge, s) per point");

  m.def(
      "coupling_constant",
      [](const std::string& profile, double rho, double v0) {
        PotentialSpec V;
        V.profile = profile == "box" ? PotentialProfile::Box : PotentialProfile::CosineBump;
        V.rho = rho;
        V.v0 = v0;
        return coupling_constant(V);
      },
      py::arg("profile"), py::arg("rho"), py::arg("v0"),
      "delta coupling strength (1/2) int V of a potential profile");

  m.def(
      "solve_amplitude",
      [](const std::string& profile, double rho, double target) {
        return solve_amplitude(
            profile == "box" ? PotentialProfile::Box : PotentialProfile::CosineBump, rho, target);
      },
      py::arg("profile"), py::arg("rho"), py::arg("target_coupling"),
      "amplitude v0 reaching a target coupling constant");
}
