#pragma once

// Spectrum of -d^2/ds^2 on the metric star graph with Neumann outer ends,
// continuity at O and the flux condition sum_j psi_j'(0+) = coupling * psi(O).
// Two independent routes:
//   * secular_eigenvalues: transcendental root solve. Branch A (psi(O) != 0)
//     are the roots of F(k) = sum_j k tan(k l_j) - coupling, one per interval
//     between tangent poles; Branch B (psi(O) = 0) are values where
//     cos(k l_i) = 0 on a set S of >= 2 edges, with multiplicity |S| - 1.
//     lambda = 0 belongs to the spectrum iff coupling = 0.
//   * graph_fem_eigenvalues: 1-D P1 finite elements sharing the junction dof.

#include <vector>

#include "t2g/gevp.hpp"
#include "t2g/star_graph.hpp"

namespace t2g {

struct SecularSolveConfig {
  int max_pairs = 16;        // stop once this many eigenvalues (with multiplicity) are found
  double k_max = 0.0;        // 0: grow automatically until max_pairs are found
  double bracket_tol = 1e-12;
  double pole_guard = 1e-9;  // exclusion zone around tangent poles; also the
                             // clustering width for simultaneous cos zeros
  int samples = GraphFunction::kDefaultSamples;
};

struct GraphEigenpair {
  double lambda = 0.0;
  double k = 0.0;  // lambda = k^2
  int multiplicity = 1;
  std::vector<GraphFunction> eigenfunctions;  // L2(G)-orthonormal basis of the eigenspace
};

std::vector<GraphEigenpair> secular_eigenvalues(const MetricStarGraph& G, double coupling,
                                                const SecularSolveConfig& cfg = {});

// Ascending eigenvalue list with multiplicities expanded, truncated to m.
std::vector<double> expanded_eigenvalues(const std::vector<GraphEigenpair>& pairs, int m);

// Eigenfunctions for an already-located k (throws DomainError when k is not
// within the solver's bracket tolerance of an eigenvalue).
std::vector<GraphFunction> graph_eigenfunctions(const MetricStarGraph& G, double coupling,
                                                double k,
                                                int samples = GraphFunction::kDefaultSamples);

// Max residual of the defining conditions for one eigenpair, evaluated from
// the analytic cosine representation (flux balance, Neumann ends, ODE).
double eigenpair_residual(const MetricStarGraph& G, double coupling,
                          const GraphEigenpair& pair);

// Independent oracle: P1 FEM on the graph, junction dof shared by all edges,
// coupling added to the stiffness diagonal at O. Returns the m smallest
// eigenvalues. Requires 0 < h < min_j l_j / 4.
std::vector<double> graph_fem_eigenvalues(const MetricStarGraph& G, double coupling, double h,
                                          int m, double tol = 1e-9);

}  // namespace t2g
