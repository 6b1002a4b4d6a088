#pragma once

// Convergence harness tying the thin-domain FEM to the graph limit:
// pullback/pushforward between nodal fields and graph functions, the
// junction-mean and energy diagnostics that certify the compactness
// estimates numerically, recovery sequences realizing the limit energy, the
// eps-sweep driver and Richardson extrapolation of its outputs.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "t2g/fem2d.hpp"
#include "t2g/graph_spectra.hpp"

namespace t2g {

// Nodal field psi(f_eps(x)): composition with the graph projection.
DiscreteField pullback(const GraphFunction& psi, const ThinDomainSpec& spec, const Mesh2D& mesh);

// Per-column cross-section averages of a tube field; stations are the mesh's
// longitudinal node columns, where the averages of a P1 field are exact.
struct TubeStations {
  std::vector<double> s;    // station coordinates in [eps*l, l_j]
  std::vector<double> avg;  // cross-section averages
};
TubeStations tube_station_averages(const DiscreteField& u, const ThinDomainSpec& spec,
                                   const Mesh2D& mesh, int j);

// Graph function with cross-section averages on (eps*l, l_j] and the junction
// mean on [0, eps*l]; resampled onto a uniform grid of `samples` points.
GraphFunction pushforward(const DiscreteField& u, const ThinDomainSpec& spec, const Mesh2D& mesh,
                          int samples = GraphFunction::kDefaultSamples);

// Mean of u over J_eps^a = J_eps union tube stubs { eps*l <= y1 < eps*a };
// elements straddling the cut are clipped exactly (P1 integrands).
double junction_mean(const DiscreteField& u, const ThinDomainSpec& spec, const Mesh2D& mesh);

// (l_j eps / (l_j - eps*l)) * int_{D_j} |grad_perp u|^2 dx  — the scaled
// transversal tube energy; O(eps^2) on bounded-energy families.
double transversal_energy(const DiscreteField& u, const ThinDomainSpec& spec, const Mesh2D& mesh,
                          int j);

// int_{J_eps^a} |grad u|^2 dx (the n = 2 junction gradient energy).
double junction_energy(const DiscreteField& u, const ThinDomainSpec& spec, const Mesh2D& mesh);

// Dirichlet energy of the station averages, sum_j int_(eps*l, l_j) |g'|^2;
// never exceeds the kinetic form of u (discrete Cauchy-Schwarz).
double pushforward_edge_energy(const DiscreteField& u, const ThinDomainSpec& spec,
                               const Mesh2D& mesh);

// Nodal recovery field: psi_j(gamma(y1)) on tube j with the affine stretch
// gamma(s) = l_j (s - eps*l) / (l_j - eps*l), the constant psi(O) on the
// junction. psi must be continuous at O.
DiscreteField recovery_sequence(const GraphFunction& psi, const ThinDomainSpec& spec,
                                const Mesh2D& mesh);

struct RichardsonFit {
  double limit = 0.0;
  double rate = 0.0;
  bool reliable = false;  // false: non-monotone/flat data, limit = last value
};

// Fit v(eps) = v0 + c eps^p through the last three (eps, value) points; eps
// must be positive and strictly decreasing.
RichardsonFit richardson_extrapolate(const std::vector<double>& values,
                                     const std::vector<double>& eps);

// Largest principal angle (as sin) between the spans of two function
// families of equal size, under the graph L2 inner product.
double subspace_distance(const std::vector<GraphFunction>& A, const std::vector<GraphFunction>& B,
                         const MetricStarGraph& G);

struct HarnessConfig {
  MetricStarGraph graph;
  double eps0 = 0.25;
  double l = 1.0;
  double a = 0.0;  // <= 0: thin-domain default
  std::vector<double> eps_list{0.2, 0.1, 0.05};
  double h_factor = 0.25;  // h = h_factor * eps
  int layers = 0;          // 0: round(2 / h_factor)
  std::optional<PotentialSpec> potential;  // nullopt: free Laplacian
  int modes = 6;
  double tol = 1e-8;
  int samples = GraphFunction::kDefaultSamples;
  int threads = 1;
};

struct ReportRow {
  double eps = 0.0;
  double h = 0.0;
  int layers = 0;
  int nodes = 0;
  int tris = 0;
  bool ok = false;
  std::string error;
  std::vector<double> lambda;
  std::vector<double> residual;
  std::map<std::string, double> scalars;  // named diagnostics, deterministic order
};

struct ConvergenceReport {
  std::vector<ReportRow> rows;  // eps descending
  std::vector<double> graph_lambda;       // expanded, ascending
  std::vector<int> graph_multiplicity;    // aligned with graph_lambda
  std::map<std::string, double> slopes;   // log-log fits over the last >= 3 rows
  struct Extrapolation {
    double limit = 0.0, rate = 0.0;
    bool reliable = false;
    double graph = 0.0, abs_err = 0.0, rel_err = 0.0;
  };
  std::vector<Extrapolation> extrapolation;  // per mode
  std::map<std::string, std::string> meta;
};

ConvergenceReport run_convergence(const HarnessConfig& cfg);

// Deterministic serializations (byte-identical for identical configs).
std::string report_to_csv(const ConvergenceReport& report);
std::string report_to_json(const ConvergenceReport& report);
// Two-column (eps value) files per diagnostic, keyed by file name.
std::map<std::string, std::string> report_plot_data(const ConvergenceReport& report);

}  // namespace t2g
