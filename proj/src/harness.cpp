#include "t2g/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <numeric>
#include <set>

#include "json.hpp"
#include "t2g/quadrature.hpp"

namespace t2g {

namespace {

std::string fmt(double v, const char* spec = "%.17g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

// Barycentric coordinates of p in the triangle (x0, x1, x2).
Eigen::Vector3d barycentric(const Vec2& p, const Vec2& x0, const Vec2& x1, const Vec2& x2) {
  const double area = cross2(x1 - x0, x2 - x0);
  return Eigen::Vector3d(cross2(x1 - p, x2 - p), cross2(x2 - p, x0 - p), cross2(x0 - p, x1 - p)) /
         area;
}

// Exact integral of the element's affine interpolant over a convex clip
// polygon (fan decomposition; the centroid rule is exact for affine fields).
double affine_integral(const std::vector<Vec2>& poly, const std::array<Vec2, 3>& x,
                       const Eigen::Vector3d& vals) {
  double acc = 0.0;
  for (size_t i = 1; i + 1 < poly.size(); ++i) {
    const double area = 0.5 * cross2(poly[i] - poly[0], poly[i + 1] - poly[0]);
    const Vec2 c = (poly[0] + poly[i] + poly[i + 1]) / 3.0;
    acc += area * barycentric(c, x[0], x[1], x[2]).dot(vals);
  }
  return acc;
}

double clipped_area(const std::vector<Vec2>& poly) {
  double acc = 0.0;
  for (size_t i = 1; i + 1 < poly.size(); ++i)
    acc += 0.5 * cross2(poly[i] - poly[0], poly[i + 1] - poly[0]);
  return acc;
}

Vec2 p1_gradient(const std::array<Vec2, 3>& x, const Eigen::Vector3d& vals) {
  const double area = 0.5 * cross2(x[1] - x[0], x[2] - x[0]);
  Vec2 g(0, 0);
  for (int i = 0; i < 3; ++i) {
    const Vec2 e = x[(i + 2) % 3] - x[(i + 1) % 3];
    g += vals[i] * Vec2(-e.y(), e.x()) / (2.0 * area);
  }
  return g;
}

struct ElementView {
  std::array<Vec2, 3> x;
  Eigen::Vector3d vals;
};

ElementView element(const Mesh2D& mesh, const DiscreteField& u, int t) {
  const auto& tr = mesh.triangles[t];
  return {{mesh.nodes[tr[0]], mesh.nodes[tr[1]], mesh.nodes[tr[2]]},
          Eigen::Vector3d(u[tr[0]], u[tr[1]], u[tr[2]])};
}

}  // namespace

DiscreteField pullback(const GraphFunction& psi, const ThinDomainSpec& spec, const Mesh2D& mesh) {
  if (psi.edge_count() != spec.graph.edge_count())
    throw DomainError("graph function does not match the domain's graph");
  DiscreteField u(mesh.node_count());
  for (int i = 0; i < mesh.node_count(); ++i) {
    const GraphPoint p = project_to_graph(mesh.nodes[i], spec);
    u[i] = psi.eval(p.edge, p.s).real();
  }
  return u;
}

TubeStations tube_station_averages(const DiscreteField& u, const ThinDomainSpec& spec,
                                   const Mesh2D& mesh, int j) {
  if (j < 0 || j >= spec.graph.edge_count()) throw DomainError("tube index out of range");
  if (u.size() != mesh.node_count()) throw DomainError("field size does not match the mesh");
  const double mouth = spec.mouth_position();
  const double lj = spec.graph.lengths[j];
  const Eigen::Matrix2d Rt = spec.graph.rotations[j].transpose();

  std::set<int> tube_nodes;
  for (int t = 0; t < mesh.tri_count(); ++t)
    if (mesh.region[t] == j)
      for (int v : mesh.triangles[t]) tube_nodes.insert(v);
  if (tube_nodes.empty()) throw MeshError("mesh has no triangles for tube " + std::to_string(j));

  struct P {
    double y1, y2;
    int idx;
  };
  std::vector<P> pts;
  pts.reserve(tube_nodes.size());
  int mouth_nodes = 0;
  const double q = 1e-6 * spec.eps;
  for (int idx : tube_nodes) {
    const Vec2 y = Rt * mesh.nodes[idx];
    pts.push_back({y.x(), y.y(), idx});
    if (std::abs(y.x() - mouth) <= q) ++mouth_nodes;
  }
  if (mouth_nodes < 2 || pts.size() % mouth_nodes != 0)
    throw MeshError("tube " + std::to_string(j) + " is not a structured grid");
  const int cols = static_cast<int>(pts.size()) / mouth_nodes;
  const double dx = (lj - mouth) / (cols - 1);

  std::vector<std::vector<P>> column(cols);
  for (const P& p : pts) {
    const int ix = static_cast<int>(std::round((p.y1 - mouth) / dx));
    if (ix < 0 || ix >= cols || std::abs(p.y1 - (mouth + ix * dx)) > 0.25 * dx)
      throw MeshError("tube " + std::to_string(j) + " node off the structured grid");
    column[ix].push_back(p);
  }

  TubeStations out;
  out.s.resize(cols);
  out.avg.resize(cols);
  for (int ix = 0; ix < cols; ++ix) {
    auto& col = column[ix];
    if (static_cast<int>(col.size()) != mouth_nodes)
      throw MeshError("tube " + std::to_string(j) + " has ragged columns");
    std::sort(col.begin(), col.end(), [](const P& a, const P& b) { return a.y2 < b.y2; });
    double integral = 0.0;
    for (size_t i = 0; i + 1 < col.size(); ++i)
      integral += 0.5 * (u[col[i].idx] + u[col[i + 1].idx]) * (col[i + 1].y2 - col[i].y2);
    out.s[ix] = (ix == cols - 1) ? lj : mouth + ix * dx;
    out.avg[ix] = integral / (2.0 * spec.eps);
  }
  return out;
}

double junction_mean(const DiscreteField& u, const ThinDomainSpec& spec, const Mesh2D& mesh) {
  if (u.size() != mesh.node_count()) throw DomainError("field size does not match the mesh");
  const double cut = spec.eps * spec.a;
  double integral = 0.0;
  for (int t = 0; t < mesh.tri_count(); ++t) {
    const ElementView e = element(mesh, u, t);
    if (mesh.region[t] == kJunctionRegion) {
      const double area = 0.5 * cross2(e.x[1] - e.x[0], e.x[2] - e.x[0]);
      integral += area * e.vals.mean();
    } else {
      const Vec2 dir = spec.graph.direction(mesh.region[t]);
      const std::vector<Vec2> clip =
          clip_halfplane({e.x[0], e.x[1], e.x[2]}, dir, cut);
      if (clip.size() >= 3) integral += affine_integral(clip, e.x, e.vals);
    }
  }
  const double area = spec.junction_area() +
                      spec.graph.edge_count() * 2.0 * spec.eps * spec.eps * (spec.a - spec.l);
  return integral / area;
}

double transversal_energy(const DiscreteField& u, const ThinDomainSpec& spec, const Mesh2D& mesh,
                          int j) {
  if (j < 0 || j >= spec.graph.edge_count()) throw DomainError("tube index out of range");
  const Vec2 perp = spec.graph.rotations[j].col(1);
  double acc = 0.0;
  for (int t = 0; t < mesh.tri_count(); ++t) {
    if (mesh.region[t] != j) continue;
    const ElementView e = element(mesh, u, t);
    const double area = 0.5 * cross2(e.x[1] - e.x[0], e.x[2] - e.x[0]);
    const double c = p1_gradient(e.x, e.vals).dot(perp);
    acc += area * c * c;
  }
  const double lj = spec.graph.lengths[j];
  return lj * spec.eps / (lj - spec.mouth_position()) * acc;
}

double junction_energy(const DiscreteField& u, const ThinDomainSpec& spec, const Mesh2D& mesh) {
  const double cut = spec.eps * spec.a;
  double acc = 0.0;
  for (int t = 0; t < mesh.tri_count(); ++t) {
    const ElementView e = element(mesh, u, t);
    const Vec2 g = p1_gradient(e.x, e.vals);
    if (mesh.region[t] == kJunctionRegion) {
      acc += 0.5 * cross2(e.x[1] - e.x[0], e.x[2] - e.x[0]) * g.squaredNorm();
    } else {
      const Vec2 dir = spec.graph.direction(mesh.region[t]);
      const std::vector<Vec2> clip = clip_halfplane({e.x[0], e.x[1], e.x[2]}, dir, cut);
      if (clip.size() >= 3) acc += clipped_area(clip) * g.squaredNorm();
    }
  }
  return acc;
}

double pushforward_edge_energy(const DiscreteField& u, const ThinDomainSpec& spec,
                               const Mesh2D& mesh) {
  double acc = 0.0;
  for (int j = 0; j < spec.graph.edge_count(); ++j) {
    const TubeStations st = tube_station_averages(u, spec, mesh, j);
    for (size_t i = 0; i + 1 < st.s.size(); ++i)
      acc += (st.avg[i + 1] - st.avg[i]) * (st.avg[i + 1] - st.avg[i]) / (st.s[i + 1] - st.s[i]);
  }
  return acc;
}

GraphFunction pushforward(const DiscreteField& u, const ThinDomainSpec& spec, const Mesh2D& mesh,
                          int samples) {
  if (samples < 2) throw DomainError("need at least 2 samples per edge");
  const double jm = junction_mean(u, spec, mesh);
  const double mouth = spec.mouth_position();
  GraphFunction f;
  f.lengths = spec.graph.lengths;
  f.vertex_value = Complex(jm, 0.0);
  f.values.resize(spec.graph.edge_count());
  for (int j = 0; j < spec.graph.edge_count(); ++j) {
    const TubeStations st = tube_station_averages(u, spec, mesh, j);
    const double dx = st.s[1] - st.s[0];
    Eigen::VectorXcd& v = f.values[j];
    v.resize(samples);
    const double lj = spec.graph.lengths[j];
    for (int i = 0; i < samples; ++i) {
      const double s = lj * i / double(samples - 1);
      if (s < mouth) {
        v[i] = jm;
      } else {
        const double t = std::min((s - mouth) / dx, double(st.s.size() - 1));
        const int i0 = std::min(static_cast<int>(t), static_cast<int>(st.s.size()) - 2);
        const double w = t - i0;
        v[i] = (1.0 - w) * st.avg[i0] + w * st.avg[i0 + 1];
      }
    }
  }
  return f;
}

DiscreteField recovery_sequence(const GraphFunction& psi, const ThinDomainSpec& spec,
                                const Mesh2D& mesh) {
  if (psi.edge_count() != spec.graph.edge_count())
    throw DomainError("graph function does not match the domain's graph");
  if (!psi.continuous_at_origin(1e-9))
    throw DomainError("recovery sequence needs a function continuous at the junction");
  const double mouth = spec.mouth_position();
  const double q = 1e-9 * spec.eps;
  DiscreteField u(mesh.node_count());
  for (int i = 0; i < mesh.node_count(); ++i) {
    const Vec2& x = mesh.nodes[i];
    double val = psi.vertex_value.real();
    for (int j = 0; j < spec.graph.edge_count(); ++j) {
      const double lj = spec.graph.lengths[j];
      const Vec2 y = spec.graph.rotations[j].transpose() * x;
      if (y.x() >= mouth - q && y.x() <= lj + q && std::abs(y.y()) <= spec.eps + q) {
        const double gamma = lj * (std::clamp(y.x(), mouth, lj) - mouth) / (lj - mouth);
        val = psi.eval(j, gamma).real();
        break;
      }
    }
    u[i] = val;
  }
  return u;
}

RichardsonFit richardson_extrapolate(const std::vector<double>& values,
                                     const std::vector<double>& eps) {
  if (values.size() != eps.size() || values.size() < 3)
    throw NumericsError("extrapolation needs at least 3 (eps, value) points");
  for (size_t i = 0; i + 1 < eps.size(); ++i)
    if (!(eps[i] > eps[i + 1]) || !(eps[i + 1] > 0.0))
      throw NumericsError("extrapolation needs positive, strictly decreasing eps");
  const size_t n = values.size();
  const double v1 = values[n - 3], v2 = values[n - 2], v3 = values[n - 1];
  const double e1 = eps[n - 3], e2 = eps[n - 2], e3 = eps[n - 1];

  RichardsonFit fit;
  fit.limit = v3;
  const double rho1 = e1 / e2, rho2 = e2 / e3;
  const double d1 = v1 - v2, d2 = v2 - v3;
  const double scale = std::max({std::abs(v1), std::abs(v2), std::abs(v3), 1e-300});
  if (std::abs(rho1 - rho2) > 1e-6 * rho1) return fit;    // non-geometric spacing
  if (d1 * d2 <= 0.0 || std::abs(d2) < 1e-12 * scale) return fit;  // flat or non-monotone
  const double r = d1 / d2;
  if (r <= 1.05) return fit;  // differences not contracting
  fit.rate = std::log(r) / std::log(rho1);
  fit.limit = v3 - d2 / (r - 1.0);
  fit.reliable = true;
  return fit;
}

double subspace_distance(const std::vector<GraphFunction>& A, const std::vector<GraphFunction>& B,
                         const MetricStarGraph& G) {
  if (A.empty() || A.size() != B.size())
    throw DomainError("subspace distance needs two nonempty families of equal size");
  const auto axpy = [](GraphFunction& f, double c, const GraphFunction& g) {
    for (int j = 0; j < f.edge_count(); ++j) f.values[j] -= c * g.values[j];
    f.vertex_value -= c * g.vertex_value;
  };
  const auto orthonormalize = [&](std::vector<GraphFunction> fam) {
    for (size_t i = 0; i < fam.size(); ++i) {
      for (size_t k = 0; k < i; ++k) axpy(fam[i], l2_inner(fam[i], fam[k], G), fam[k]);
      const double nrm = l2_norm(fam[i], G);
      if (nrm < 1e-10) throw NumericsError("function family is numerically dependent");
      for (int j = 0; j < fam[i].edge_count(); ++j) fam[i].values[j] /= nrm;
      fam[i].vertex_value /= nrm;
    }
    return fam;
  };
  const std::vector<GraphFunction> QA = orthonormalize(A);
  const std::vector<GraphFunction> QB = orthonormalize(B);
  const int m = static_cast<int>(QA.size());
  Eigen::MatrixXd C(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) C(i, j) = l2_inner(QA[i], QB[j], G);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(C);
  const double smin = std::clamp(svd.singularValues().minCoeff(), 0.0, 1.0);
  return std::sqrt(std::max(0.0, 1.0 - smin * smin));
}

namespace {

struct RowInputs {
  const HarnessConfig* cfg;
  double coupling = 0.0;
  int diag_mode = -1;
};

ReportRow compute_row(const RowInputs& in, double eps) {
  const HarnessConfig& cfg = *in.cfg;
  ReportRow row;
  row.eps = eps;
  row.h = cfg.h_factor * eps;
  row.layers = cfg.layers > 0 ? cfg.layers : std::max(2, (int)std::lround(2.0 / cfg.h_factor));
  try {
    const ThinDomainSpec spec =
        build_thin_domain(cfg.graph, eps, cfg.eps0, cfg.l, std::nullopt, cfg.a);
    if (cfg.potential) validate_potential_support(*cfg.potential, spec);
    const Mesh2D mesh = triangulate(spec, row.h, row.layers);
    validate_mesh(mesh);
    row.nodes = mesh.node_count();
    row.tris = mesh.tri_count();

    const AssembledForms forms =
        assemble(mesh, spec, cfg.potential ? &*cfg.potential : nullptr);
    const SparseSymMatrix A = sparse_sum(forms.K, forms.P);

    const EigenResult modes = solve_gevp(A, forms.M, cfg.modes, cfg.tol);
    row.lambda.assign(modes.eigenvalues.data(), modes.eigenvalues.data() + cfg.modes);
    row.residual.assign(modes.residuals.data(), modes.residuals.data() + cfg.modes);

    row.scalars["measure_err"] =
        std::abs(measure_total(spec) - cfg.graph.total_length());
    row.scalars["gh_error"] = gh_measure_error(
        spec, [&](int j, double s) { return 1.0 - s / cfg.graph.lengths[j]; });
    const DiscreteField ones = DiscreteField::Ones(mesh.node_count());
    row.scalars["potential_mass_err"] =
        std::abs(forms.P.quadratic_form(ones) - in.coupling);

    if (in.diag_mode >= 0 && in.diag_mode < cfg.modes) {
      const DiscreteField v = modes.eigenvectors.col(in.diag_mode);
      double trans = 0.0;
      for (int j = 0; j < cfg.graph.edge_count(); ++j)
        trans += transversal_energy(v, spec, mesh, j);
      row.scalars["transversal_energy"] = trans;
      row.scalars["junction_energy"] = junction_energy(v, spec, mesh);
      const double jm = junction_mean(v, spec, mesh);
      for (int j = 0; j < cfg.graph.edge_count(); ++j) {
        const TubeStations st = tube_station_averages(v, spec, mesh, j);
        const double s_eval = std::min(2.0 * spec.mouth_position(), cfg.graph.lengths[j]);
        const double dx = st.s[1] - st.s[0];
        const double t = std::clamp((s_eval - st.s[0]) / dx, 0.0, double(st.s.size() - 1));
        const int i0 = std::min((int)t, (int)st.s.size() - 2);
        const double w = t - i0;
        const double g = (1.0 - w) * st.avg[i0] + w * st.avg[i0 + 1];
        row.scalars["junction_gap_" + std::to_string(j)] = std::abs(jm - g);
      }
    }
    row.ok = true;
  } catch (const std::exception& ex) {
    row.ok = false;
    row.error = ex.what();
  }
  return row;
}

}  // namespace

ConvergenceReport run_convergence(const HarnessConfig& cfg) {
  if (cfg.graph.edge_count() < 1) throw DomainError("convergence run needs a graph");
  if (cfg.eps_list.size() < 1) throw DomainError("convergence run needs an eps sweep");
  if (cfg.modes < 1) throw DomainError("need at least one mode");
  std::vector<double> eps = cfg.eps_list;
  std::sort(eps.rbegin(), eps.rend());

  ConvergenceReport rep;
  const double coupling = cfg.potential ? coupling_constant(*cfg.potential) : 0.0;

  SecularSolveConfig scfg;
  scfg.max_pairs = cfg.modes;
  scfg.samples = cfg.samples;
  const std::vector<GraphEigenpair> pairs = secular_eigenvalues(cfg.graph, coupling, scfg);
  for (const GraphEigenpair& p : pairs)
    for (int i = 0; i < p.multiplicity && (int)rep.graph_lambda.size() < cfg.modes; ++i) {
      rep.graph_lambda.push_back(p.lambda);
      rep.graph_multiplicity.push_back(p.multiplicity);
    }

  RowInputs in{&cfg, coupling, -1};
  for (size_t m = 0; m < rep.graph_lambda.size(); ++m)
    if (rep.graph_lambda[m] > 1e-9 && rep.graph_multiplicity[m] == 1) {
      in.diag_mode = static_cast<int>(m);
      break;
    }

  if (cfg.threads > 1) {
    std::vector<std::future<ReportRow>> futs;
    for (double e : eps)
      futs.push_back(std::async(std::launch::async, [&, e] { return compute_row(in, e); }));
    for (auto& f : futs) rep.rows.push_back(f.get());
  } else {
    for (double e : eps) rep.rows.push_back(compute_row(in, e));
  }

  // Eigenvalue errors join the scalar table so slopes cover them uniformly.
  for (ReportRow& row : rep.rows)
    if (row.ok)
      for (int m = 0; m < cfg.modes && m < (int)rep.graph_lambda.size(); ++m)
        row.scalars["lambda_err_" + std::to_string(m)] =
            std::abs(row.lambda[m] - rep.graph_lambda[m]);

  const bool all_ok =
      std::all_of(rep.rows.begin(), rep.rows.end(), [](const ReportRow& r) { return r.ok; });
  // Fits use the last three eps only: the coarsest levels sit outside the
  // asymptotic regime and would bias both the slopes and the limits.
  const size_t fit_begin = rep.rows.size() >= 3 ? rep.rows.size() - 3 : 0;
  const std::vector<double> fit_eps(eps.begin() + fit_begin, eps.end());
  if (all_ok && rep.rows.size() >= 3) {
    std::set<std::string> keys;
    for (const auto& [k, v] : rep.rows.front().scalars) keys.insert(k);
    for (const std::string& k : keys) {
      std::vector<double> vals;
      bool usable = true;
      for (size_t i = fit_begin; i < rep.rows.size(); ++i) {
        const auto it = rep.rows[i].scalars.find(k);
        if (it == rep.rows[i].scalars.end() || !(it->second > 0.0)) {
          usable = false;
          break;
        }
        vals.push_back(it->second);
      }
      if (usable) rep.slopes[k] = slope_loglog(fit_eps, vals);
    }
  } else if (!all_ok) {
    rep.meta["warning"] = "one or more rows failed; slopes and extrapolation skipped";
  }

  if (all_ok && rep.rows.size() >= 3) {
    for (int m = 0; m < cfg.modes; ++m) {
      std::vector<double> vals;
      for (const ReportRow& r : rep.rows) vals.push_back(r.lambda[m]);
      const RichardsonFit fit = richardson_extrapolate(vals, eps);
      ConvergenceReport::Extrapolation ex;
      ex.limit = fit.limit;
      ex.rate = fit.rate;
      ex.reliable = fit.reliable;
      if (m < (int)rep.graph_lambda.size()) {
        ex.graph = rep.graph_lambda[m];
        ex.abs_err = std::abs(fit.limit - ex.graph);
        ex.rel_err = ex.abs_err / std::max(std::abs(ex.graph), 1e-12);
      }
      rep.extrapolation.push_back(ex);
    }
  }

  rep.meta["coupling"] = fmt(coupling);
  rep.meta["modes"] = std::to_string(cfg.modes);
  rep.meta["h_factor"] = fmt(cfg.h_factor);
  rep.meta["diag_mode"] = std::to_string(in.diag_mode);
  rep.meta["potential"] =
      cfg.potential ? (cfg.potential->profile == PotentialProfile::Box ? "box" : "cosine")
                    : "none";
  return rep;
}

std::string report_to_csv(const ConvergenceReport& report) {
  std::set<std::string> keys;
  int modes = 0;
  for (const ReportRow& r : report.rows) {
    for (const auto& [k, v] : r.scalars) keys.insert(k);
    modes = std::max(modes, (int)r.lambda.size());
  }
  std::string out = "eps,h,layers,nodes,tris,ok,error";
  for (int m = 0; m < modes; ++m) out += ",lambda_" + std::to_string(m);
  for (int m = 0; m < modes; ++m) out += ",residual_" + std::to_string(m);
  for (const std::string& k : keys) out += "," + k;
  out += "\n";
  for (const ReportRow& r : report.rows) {
    out += fmt(r.eps, "%.15g") + "," + fmt(r.h, "%.15g") + "," + std::to_string(r.layers) + "," +
           std::to_string(r.nodes) + "," + std::to_string(r.tris) + "," +
           (r.ok ? "1" : "0") + ",";
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    out += err;
    for (int m = 0; m < modes; ++m)
      out += "," + (m < (int)r.lambda.size() ? fmt(r.lambda[m], "%.15g") : std::string());
    for (int m = 0; m < modes; ++m)
      out += "," + (m < (int)r.residual.size() ? fmt(r.residual[m], "%.15g") : std::string());
    for (const std::string& k : keys) {
      const auto it = r.scalars.find(k);
      out += "," + (it != r.scalars.end() ? fmt(it->second, "%.15g") : std::string());
    }
    out += "\n";
  }
  return out;
}

std::string report_to_json(const ConvergenceReport& report) {
  nlohmann::ordered_json j;
  j["schema"] = "thin2graph/report/1";
  j["graph"]["lambda"] = report.graph_lambda;
  j["graph"]["multiplicity"] = report.graph_multiplicity;
  j["rows"] = nlohmann::ordered_json::array();
  for (const ReportRow& r : report.rows) {
    nlohmann::ordered_json row;
    row["eps"] = r.eps;
    row["h"] = r.h;
    row["layers"] = r.layers;
    row["nodes"] = r.nodes;
    row["tris"] = r.tris;
    row["ok"] = r.ok;
    row["error"] = r.error;
    row["lambda"] = r.lambda;
    row["residual"] = r.residual;
    row["scalars"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.scalars) row["scalars"][k] = v;
    j["rows"].push_back(row);
  }
  j["slopes"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.slopes) j["slopes"][k] = v;
  j["extrapolation"] = nlohmann::ordered_json::array();
  for (const auto& ex : report.extrapolation) {
    nlohmann::ordered_json e;
    e["limit"] = ex.limit;
    e["rate"] = ex.rate;
    e["reliable"] = ex.reliable;
    e["graph"] = ex.graph;
    e["abs_err"] = ex.abs_err;
    e["rel_err"] = ex.rel_err;
    j["extrapolation"].push_back(e);
  }
  j["meta"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.meta) j["meta"][k] = v;
  return j.dump(2) + "\n";
}

std::map<std::string, std::string> report_plot_data(const ConvergenceReport& report) {
  std::map<std::string, std::string> files;
  std::set<std::string> keys;
  for (const ReportRow& r : report.rows)
    for (const auto& [k, v] : r.scalars) keys.insert(k);
  for (const std::string& k : keys) {
    std::string body = "# eps " + k + "\n";
    for (const ReportRow& r : report.rows) {
      const auto it = r.scalars.find(k);
      if (r.ok && it != r.scalars.end())
        body += fmt(r.eps, "%.15g") + " " + fmt(it->second, "%.15g") + "\n";
    }
    files[k + ".dat"] = body;
  }
  for (size_t m = 0; report.rows.size() && m < report.rows.front().lambda.size(); ++m) {
    std::string body = "# eps lambda_" + std::to_string(m) + "\n";
    for (const ReportRow& r : report.rows)
      if (r.ok && m < r.lambda.size())
        body += fmt(r.eps, "%.15g") + " " + fmt(r.lambda[m], "%.15g") + "\n";
    files["lambda_" + std::to_string(m) + ".dat"] = body;
  }
  return files;
}

}  // namespace t2g
