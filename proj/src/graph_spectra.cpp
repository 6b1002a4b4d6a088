#include "t2g/graph_spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace t2g {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

double secular_value(const MetricStarGraph& G, double coupling, double k) {
  double s = -coupling;
  for (double l : G.lengths) s += k * std::tan(k * l);
  return s;
}

double secular_slope(const MetricStarGraph& G, double k) {
  double s = 0.0;
  for (double l : G.lengths) {
    const double c = std::cos(k * l);
    s += std::tan(k * l) + k * l / (c * c);
  }
  return s;
}

// Tangent poles of k -> k tan(k l_j), grouped when several edges hit the same
// k within `guard` (equal-length stars do this exactly).
struct PoleCluster {
  double k = 0.0;
  std::vector<int> edges;
};

std::vector<PoleCluster> pole_clusters(const MetricStarGraph& G, double k_max, double guard) {
  std::vector<std::pair<double, int>> poles;
  for (int j = 0; j < G.edge_count(); ++j) {
    const double l = G.lengths[j];
    for (int m = 0;; ++m) {
      const double k = (m + 0.5) * kPi / l;
      if (k > k_max) break;
      poles.emplace_back(k, j);
    }
  }
  std::sort(poles.begin(), poles.end());
  std::vector<PoleCluster> out;
  for (const auto& [k, j] : poles) {
    if (!out.empty() && k - out.back().k <= guard) {
      PoleCluster& c = out.back();
      c.k = (c.k * c.edges.size() + k) / (c.edges.size() + 1);
      c.edges.push_back(j);
    } else {
      out.push_back({k, {j}});
    }
  }
  return out;
}

double cos_mass(double l, double k) {
  if (k == 0.0) return l;
  return 0.5 * l + 0.25 * std::sin(2.0 * k * l) / k;
}

GraphFunction sample_cosine(const MetricStarGraph& G, double k, const std::vector<double>& amps,
                            double vertex, int n) {
  return sample_function(
      G,
      [&](int j, double s) {
        return Complex(amps[j] * std::cos(k * (G.lengths[j] - s)), 0.0);
      },
      Complex(vertex, 0.0), n);
}

std::vector<GraphFunction> branch_a_functions(const MetricStarGraph& G, double k, int n) {
  const int N = G.edge_count();
  std::vector<double> amps(N);
  double norm2 = 0.0;
  if (k == 0.0) {
    for (int j = 0; j < N; ++j) amps[j] = 1.0;
    norm2 = G.total_length();
  } else {
    for (int j = 0; j < N; ++j) {
      amps[j] = 1.0 / std::cos(k * G.lengths[j]);
      norm2 += amps[j] * amps[j] * cos_mass(G.lengths[j], k);
    }
  }
  const double scale = 1.0 / std::sqrt(norm2);
  for (double& a : amps) a *= scale;
  return {sample_cosine(G, k, amps, scale, n)};
}

std::vector<GraphFunction> branch_b_functions(const MetricStarGraph& G, double k,
                                              const std::vector<int>& S, int n) {
  // Amplitudes a on the edges of S with sum_i a_i sin(k l_i) = 0 (flux), all
  // other edges zero. The L2 Gram over S is diag(cos_mass), so substitute
  // b_i = a_i sqrt(mass_i) and take a Householder basis of the complement of
  // tau_i = sin(k l_i)/sqrt(mass_i).
  const int s = static_cast<int>(S.size());
  Eigen::VectorXd tau(s), root_mass(s);
  for (int i = 0; i < s; ++i) {
    const double mass = cos_mass(G.lengths[S[i]], k);
    root_mass[i] = std::sqrt(mass);
    tau[i] = std::sin(k * G.lengths[S[i]]) / root_mass[i];
  }
  Eigen::VectorXd v = tau;
  v[0] += (tau[0] >= 0.0 ? 1.0 : -1.0) * tau.norm();
  const double vtv = v.squaredNorm();

  std::vector<GraphFunction> out;
  std::vector<double> amps(G.edge_count(), 0.0);
  for (int r = 1; r < s; ++r) {
    // Column r of H = I - 2 v v^T / (v^T v); orthogonal to tau by construction.
    Eigen::VectorXd b = -2.0 * v[r] / vtv * v;
    b[r] += 1.0;
    std::fill(amps.begin(), amps.end(), 0.0);
    for (int i = 0; i < s; ++i) amps[S[i]] = b[i] / root_mass[i];
    out.push_back(sample_cosine(G, k, amps, 0.0, n));
  }
  return out;
}

// One strictly increasing branch of F between consecutive pole clusters:
// bisection inside the guarded bracket, then a few clamped Newton steps.
double refine_root(const MetricStarGraph& G, double coupling, double lo, double hi, double tol) {
  double flo = secular_value(G, coupling, lo);
  double fhi = secular_value(G, coupling, hi);
  if (!(flo < 0.0 && fhi > 0.0)) throw SolverError("secular bracket lost its sign change");
  const double lo0 = lo, hi0 = hi;
  while (hi - lo > tol * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = secular_value(G, coupling, mid);
    if (fm < 0.0) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  double k = 0.5 * (lo + hi);
  for (int it = 0; it < 4; ++it) {
    const double f = secular_value(G, coupling, k);
    const double df = secular_slope(G, k);
    if (!(df > 0.0)) break;
    double next = k - f / df;
    next = std::clamp(next, lo0, hi0);
    if (std::abs(next - k) <= 1e-17 * std::max(1.0, k)) {
      k = next;
      break;
    }
    k = next;
  }
  return k;
}

struct Found {
  double k;
  int multiplicity;
  std::vector<GraphFunction> funcs;
};

}  // namespace

std::vector<GraphEigenpair> secular_eigenvalues(const MetricStarGraph& G, double coupling,
                                                const SecularSolveConfig& cfg) {
  if (coupling < 0.0) throw DomainError("delta coupling must be nonnegative");
  if (cfg.max_pairs < 1) throw DomainError("max_pairs must be at least 1");
  const double guard = cfg.pole_guard;

  const bool fixed_window = cfg.k_max > 0.0;
  double k_max = fixed_window ? cfg.k_max
                              : kPi * (cfg.max_pairs + 3) / G.total_length() + 1.0;

  std::vector<Found> found;
  for (int attempt = 0;; ++attempt) {
    if (attempt > 60) throw SolverError("secular search window failed to grow to quota");
    found.clear();
    int count = 0;

    if (coupling == 0.0) {
      found.push_back({0.0, 1, branch_a_functions(G, 0.0, cfg.samples)});
      ++count;
    }

    const std::vector<PoleCluster> clusters = pole_clusters(G, k_max, guard);
    for (const PoleCluster& c : clusters)
      if (c.edges.size() >= 2) {
        std::vector<int> S(c.edges);
        found.push_back({c.k, static_cast<int>(S.size()) - 1,
                         branch_b_functions(G, c.k, S, cfg.samples)});
        count += static_cast<int>(S.size()) - 1;
      }

    double lo = 0.0;
    for (size_t i = 0; i <= clusters.size(); ++i) {
      const double hi = (i < clusters.size()) ? clusters[i].k : k_max;
      const double a = std::max(lo + guard, 1e-9);
      const double b = hi - (i < clusters.size() ? guard : 0.0);
      if (b > a) {
        const double fa = secular_value(G, coupling, a);
        const double fb = secular_value(G, coupling, b);
        if (fa < 0.0 && fb > 0.0) {
          found.push_back({refine_root(G, coupling, a, b, cfg.bracket_tol), 1, {}});
          ++count;
        }
      }
      if (i < clusters.size()) lo = clusters[i].k;
    }

    if (count >= cfg.max_pairs || fixed_window) break;
    k_max *= 1.6;
  }

  // Branch-A eigenfunctions were deferred so the growth loop stays cheap.
  for (Found& f : found)
    if (f.funcs.empty()) f.funcs = branch_a_functions(G, f.k, cfg.samples);

  std::sort(found.begin(), found.end(), [](const Found& a, const Found& b) { return a.k < b.k; });

  std::vector<GraphEigenpair> out;
  int total = 0;
  for (Found& f : found) {
    if (!out.empty() && f.k - out.back().k <= guard) {
      GraphEigenpair& prev = out.back();
      prev.multiplicity += f.multiplicity;
      for (GraphFunction& g : f.funcs) prev.eigenfunctions.push_back(std::move(g));
      total += f.multiplicity;
    } else {
      if (total >= cfg.max_pairs) break;
      GraphEigenpair p;
      p.k = f.k;
      p.lambda = f.k * f.k;
      p.multiplicity = f.multiplicity;
      p.eigenfunctions = std::move(f.funcs);
      out.push_back(std::move(p));
      total += p.multiplicity;
    }
  }
  return out;
}

std::vector<double> expanded_eigenvalues(const std::vector<GraphEigenpair>& pairs, int m) {
  std::vector<double> out;
  for (const GraphEigenpair& p : pairs)
    for (int i = 0; i < p.multiplicity && static_cast<int>(out.size()) < m; ++i)
      out.push_back(p.lambda);
  return out;
}

std::vector<GraphFunction> graph_eigenfunctions(const MetricStarGraph& G, double coupling,
                                                double k, int samples) {
  if (coupling < 0.0) throw DomainError("delta coupling must be nonnegative");
  if (k < 0.0) throw DomainError("k must be nonnegative");
  if (k < 1e-12) {
    if (coupling != 0.0)
      throw DomainError("lambda = 0 is an eigenvalue only for zero coupling");
    return branch_a_functions(G, 0.0, samples);
  }
  std::vector<int> S;
  for (int j = 0; j < G.edge_count(); ++j) {
    const double l = G.lengths[j];
    const double m = std::round(k * l / kPi - 0.5);
    if (m >= 0.0 && std::abs(k - (m + 0.5) * kPi / l) <= 1e-9) S.push_back(j);
  }
  if (S.size() >= 2) return branch_b_functions(G, k, S, samples);
  if (S.size() == 1)
    throw DomainError("k hits a tangent pole of a single edge; not an eigenvalue");
  const double f = secular_value(G, coupling, k);
  const double df = secular_slope(G, k);
  if (!(df > 0.0) || std::abs(f / df) > 1e-7)
    throw DomainError("k does not satisfy the secular equation");
  return branch_a_functions(G, k, samples);
}

double eigenpair_residual(const MetricStarGraph& G, double coupling, const GraphEigenpair& pair) {
  const double k = pair.k;
  double worst = 0.0;
  for (const GraphFunction& f : pair.eigenfunctions) {
    if (f.edge_count() != G.edge_count())
      throw DomainError("eigenfunction does not match the graph");
    Complex flux{0.0, 0.0};
    for (int j = 0; j < G.edge_count(); ++j) {
      const double l = G.lengths[j];
      const int n = f.samples(j);
      const Complex amp = f.values[j][n - 1];  // cos(k*(l-s)) = 1 at the outer end
      worst = std::max(worst, std::abs(amp * std::cos(k * l) - f.vertex_value));
      flux += amp * k * std::sin(k * l);
      const int stride = std::max(1, n / 16);
      for (int i = 0; i < n; i += stride) {
        const double s = f.grid_point(j, i);
        worst = std::max(worst, std::abs(f.values[j][i] - amp * std::cos(k * (l - s))));
      }
    }
    worst = std::max(worst, std::abs(flux - coupling * f.vertex_value));
  }
  return worst;
}

std::vector<double> graph_fem_eigenvalues(const MetricStarGraph& G, double coupling, double h,
                                          int m, double tol) {
  if (coupling < 0.0) throw DomainError("delta coupling must be nonnegative");
  if (!(h > 0.0) || h >= G.min_length() / 4.0)
    throw DomainError("graph FEM mesh size must satisfy 0 < h < min edge length / 4");
  const int N = G.edge_count();
  std::vector<int> cells(N), offset(N);
  int dofs = 1;  // dof 0 is the junction, shared by every edge
  for (int j = 0; j < N; ++j) {
    cells[j] = static_cast<int>(std::ceil(G.lengths[j] / h));
    offset[j] = dofs;
    dofs += cells[j];
  }
  if (m < 1 || m > dofs) throw DomainError("requested eigenvalue count out of range");

  const auto dof = [&](int j, int i) { return i == 0 ? 0 : offset[j] + i - 1; };
  std::vector<Triplet> K, M;
  K.reserve(3 * dofs + 1);
  M.reserve(3 * dofs);
  for (int j = 0; j < N; ++j) {
    const double hj = G.lengths[j] / cells[j];
    for (int i = 0; i < cells[j]; ++i) {
      const int a = dof(j, i), b = dof(j, i + 1);
      K.push_back({a, a, 1.0 / hj});
      K.push_back({b, b, 1.0 / hj});
      K.push_back({a, b, -1.0 / hj});
      M.push_back({a, a, hj / 3.0});
      M.push_back({b, b, hj / 3.0});
      M.push_back({a, b, hj / 6.0});
    }
  }
  K.push_back({0, 0, coupling});

  const EigenResult r = solve_gevp(SparseSymMatrix::from_triplets(dofs, K),
                                   SparseSymMatrix::from_triplets(dofs, M), m, tol);
  return std::vector<double>(r.eigenvalues.data(), r.eigenvalues.data() + m);
}

}  // namespace t2g
