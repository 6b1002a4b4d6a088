#pragma once

// Metric star graph: N edges of lengths l_j glued at the origin O, each edge
// embedded in the plane through a rotation R_j mapping (1,0) to the edge
// direction. Functions live on the disjoint edges as uniformly sampled
// arrays plus one junction value; the limit energy is
//   sum_j int |psi_j'|^2 ds + coupling * |psi(O)|^2
// on functions continuous at O, and +infinity otherwise.

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "t2g/errors.hpp"

namespace t2g {

using Complex = std::complex<double>;

struct MetricStarGraph {
  std::vector<double> lengths;               // l_j > 0
  std::vector<double> angles;                // direction angle of edge j, in [0, 2*pi)
  std::vector<Eigen::Matrix2d> rotations;    // R_j in SO(2), R_j*(1,0) = direction

  int edge_count() const { return static_cast<int>(lengths.size()); }
  double total_length() const;
  double min_length() const;
  Eigen::Vector2d direction(int j) const { return rotations[j].col(0); }
};

MetricStarGraph build_star(const std::vector<double>& lengths, const std::vector<double>& angles);

struct GraphFunction {
  std::vector<double> lengths;            // grid domains, one per edge
  std::vector<Eigen::VectorXcd> values;   // uniform samples on [0, l_j]
  Complex vertex_value{0.0, 0.0};         // psi(O)

  static constexpr int kDefaultSamples = 1024;

  int edge_count() const { return static_cast<int>(lengths.size()); }
  int samples(int j) const { return static_cast<int>(values[j].size()); }
  double grid_point(int j, int i) const {
    return lengths[j] * static_cast<double>(i) / static_cast<double>(samples(j) - 1);
  }
  // Piecewise-linear evaluation; s is clamped to [0, l_j].
  Complex eval(int j, double s) const;
  bool continuous_at_origin(double tol) const;
};

// Sample psi(j, s) on `n` uniform points per edge; the junction value is
// supplied separately (it need not match the edge samples at s = 0).
GraphFunction sample_function(const MetricStarGraph& G,
                              const std::function<Complex(int, double)>& psi, Complex vertex,
                              int n = GraphFunction::kDefaultSamples);

struct LimitFormParams {
  double coupling = 0.0;  // delta coupling strength at O (C_V)
};

// Real part of the Hermitian L2 inner product sum_j int f_j conj(g_j) ds,
// by composite Simpson on each edge. Mismatched sample counts are handled by
// linear interpolation of g onto f's grid; mismatched graphs throw.
double l2_inner(const GraphFunction& f, const GraphFunction& g, const MetricStarGraph& G);
double l2_norm(const GraphFunction& f, const MetricStarGraph& G);

// Limit energy form. Functions failing the vertex-continuity test within
// tol_continuity return +infinity (the form's extended-value sentinel).
double limit_energy(const GraphFunction& psi, const LimitFormParams& p, const MetricStarGraph& G,
                    double tol_continuity = 1e-10);

// CSV layout: header "edge,s,value_re,value_im"; one row per sample, plus the
// junction value as edge=-1, s=0. Round-trips bit-exactly.
std::string graph_function_to_csv(const GraphFunction& f);
GraphFunction graph_function_from_csv(const std::string& text);

}  // namespace t2g
