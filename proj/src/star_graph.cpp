#include "t2g/star_graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "t2g/quadrature.hpp"

namespace t2g {

double MetricStarGraph::total_length() const {
  return std::accumulate(lengths.begin(), lengths.end(), 0.0);
}

double MetricStarGraph::min_length() const {
  return *std::min_element(lengths.begin(), lengths.end());
}

MetricStarGraph build_star(const std::vector<double>& lengths, const std::vector<double>& angles) {
  if (lengths.empty()) throw DomainError("star graph needs at least one edge");
  if (lengths.size() != angles.size())
    throw DomainError("lengths and angles must have the same size");
  MetricStarGraph G;
  G.lengths = lengths;
  G.angles.reserve(angles.size());
  constexpr double two_pi = 6.283185307179586476925286766559;
  for (size_t j = 0; j < lengths.size(); ++j) {
    if (!(lengths[j] > 0.0)) throw DomainError("edge lengths must be positive");
    double a = std::fmod(angles[j], two_pi);
    if (a < 0.0) a += two_pi;
    G.angles.push_back(a);
  }
  for (size_t i = 0; i < G.angles.size(); ++i)
    for (size_t j = i + 1; j < G.angles.size(); ++j) {
      double d = std::abs(G.angles[i] - G.angles[j]);
      d = std::min(d, two_pi - d);
      if (d < 1e-9) throw DomainError("edge directions must be distinct");
    }
  G.rotations.reserve(lengths.size());
  for (double a : G.angles) {
    Eigen::Matrix2d R;
    R << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    G.rotations.push_back(R);
  }
  return G;
}

Complex GraphFunction::eval(int j, double s) const {
  const Eigen::VectorXcd& v = values[j];
  const int n = static_cast<int>(v.size());
  const double l = lengths[j];
  if (s <= 0.0) return v[0];
  if (s >= l) return v[n - 1];
  const double t = s / l * (n - 1);
  const int i = std::min(static_cast<int>(t), n - 2);
  const double w = t - i;
  return (1.0 - w) * v[i] + w * v[i + 1];
}

bool GraphFunction::continuous_at_origin(double tol) const {
  for (int j = 0; j < edge_count(); ++j)
    if (std::abs(values[j][0] - vertex_value) > tol) return false;
  return true;
}

GraphFunction sample_function(const MetricStarGraph& G,
                              const std::function<Complex(int, double)>& psi, Complex vertex,
                              int n) {
  if (n < 2) throw DomainError("need at least 2 samples per edge");
  GraphFunction f;
  f.lengths = G.lengths;
  f.vertex_value = vertex;
  f.values.resize(G.edge_count());
  for (int j = 0; j < G.edge_count(); ++j) {
    Eigen::VectorXcd& v = f.values[j];
    v.resize(n);
    for (int i = 0; i < n; ++i) v[i] = psi(j, G.lengths[j] * i / double(n - 1));
  }
  return f;
}

namespace {

void check_same_graph(const GraphFunction& f, const GraphFunction& g, const MetricStarGraph& G) {
  if (f.edge_count() != G.edge_count() || g.edge_count() != G.edge_count())
    throw DomainError("graph functions do not match the graph's edge count");
  for (int j = 0; j < G.edge_count(); ++j)
    if (std::abs(f.lengths[j] - G.lengths[j]) > 1e-12 ||
        std::abs(g.lengths[j] - G.lengths[j]) > 1e-12)
      throw DomainError("graph functions live on different edge lengths");
}

}  // namespace

double l2_inner(const GraphFunction& f, const GraphFunction& g, const MetricStarGraph& G) {
  check_same_graph(f, g, G);
  double acc = 0.0;
  for (int j = 0; j < G.edge_count(); ++j) {
    const int n = f.samples(j);
    const double h = G.lengths[j] / (n - 1);
    const std::vector<double> w = uniform_quad_weights(n, h);
    Complex sum{0.0, 0.0};
    for (int i = 0; i < n; ++i) {
      const Complex gv =
          (g.samples(j) == n) ? g.values[j][i] : g.eval(j, f.grid_point(j, i));
      sum += w[i] * f.values[j][i] * std::conj(gv);
    }
    acc += sum.real();
  }
  return acc;
}

double l2_norm(const GraphFunction& f, const MetricStarGraph& G) {
  return std::sqrt(std::max(0.0, l2_inner(f, f, G)));
}

double limit_energy(const GraphFunction& psi, const LimitFormParams& p, const MetricStarGraph& G,
                    double tol_continuity) {
  if (psi.edge_count() != G.edge_count())
    throw DomainError("graph function does not match the graph's edge count");
  if (!psi.continuous_at_origin(tol_continuity))
    return std::numeric_limits<double>::infinity();
  double acc = p.coupling * std::norm(psi.vertex_value);
  for (int j = 0; j < G.edge_count(); ++j) {
    const int n = psi.samples(j);
    const double h = G.lengths[j] / (n - 1);
    // |psi'|^2 of the piecewise-linear interpolant: exact per segment.
    for (int i = 0; i + 1 < n; ++i)
      acc += std::norm(psi.values[j][i + 1] - psi.values[j][i]) / h;
  }
  return acc;
}

std::string graph_function_to_csv(const GraphFunction& f) {
  std::string out = "edge,s,value_re,value_im\n";
  char buf[128];
  std::snprintf(buf, sizeof buf, "-1,%.17g,%.17g,%.17g\n", 0.0, f.vertex_value.real(),
                f.vertex_value.imag());
  out += buf;
  for (int j = 0; j < f.edge_count(); ++j)
    for (int i = 0; i < f.samples(j); ++i) {
      std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", j, f.grid_point(j, i),
                    f.values[j][i].real(), f.values[j][i].imag());
      out += buf;
    }
  return out;
}

GraphFunction graph_function_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("edge,s,value_re,value_im", 0) != 0)
    throw DomainError("graph function CSV missing header");
  struct Row {
    int edge;
    double s, re, im;
  };
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Row r;
    if (std::sscanf(line.c_str(), "%d,%lf,%lf,%lf", &r.edge, &r.s, &r.re, &r.im) != 4)
      throw DomainError("malformed graph function CSV row: " + line);
    rows.push_back(r);
  }
  GraphFunction f;
  bool have_vertex = false;
  int max_edge = -1;
  for (const Row& r : rows) max_edge = std::max(max_edge, r.edge);
  if (max_edge < 0) throw DomainError("graph function CSV has no edge rows");
  f.lengths.assign(max_edge + 1, 0.0);
  std::vector<std::vector<Complex>> vals(max_edge + 1);
  for (const Row& r : rows) {
    if (r.edge == -1) {
      f.vertex_value = Complex(r.re, r.im);
      have_vertex = true;
    } else {
      vals[r.edge].emplace_back(r.re, r.im);
      f.lengths[r.edge] = std::max(f.lengths[r.edge], r.s);
    }
  }
  if (!have_vertex) throw DomainError("graph function CSV missing junction row (edge=-1)");
  f.values.resize(max_edge + 1);
  for (int j = 0; j <= max_edge; ++j) {
    if (vals[j].size() < 2) throw DomainError("graph function CSV edge has fewer than 2 samples");
    f.values[j] = Eigen::Map<Eigen::VectorXcd>(vals[j].data(), vals[j].size());
  }
  return f;
}

}  // namespace t2g
