#include "t2g/thin_domain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "t2g/quadrature.hpp"

namespace t2g {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// Mouth endpoints of tube j at the reference scale: R_j (eps0*l, -eps0) and
// R_j (eps0*l, +eps0). Traversing minus -> plus keeps the junction interior
// on the left, as a CCW boundary requires.
Vec2 mouth_corner(const MetricStarGraph& G, double eps0, double l, int j, int side) {
  return G.rotations[j] * Vec2(eps0 * l, side * eps0);
}

std::vector<Vec2> auto_junction(const MetricStarGraph& G, double eps0, double l) {
  const int N = G.edge_count();
  if (N == 1) {
    std::vector<Vec2> box = {
        G.rotations[0] * Vec2(eps0 * l, -eps0), G.rotations[0] * Vec2(eps0 * l, eps0),
        G.rotations[0] * Vec2(-eps0 * l, eps0), G.rotations[0] * Vec2(-eps0 * l, -eps0)};
    return box;
  }
  std::vector<int> order(N);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return G.angles[a] < G.angles[b]; });
  const double beta = std::atan2(1.0, l);  // half-angle subtended by a mouth
  for (int i = 0; i < N; ++i) {
    const double here = G.angles[order[i]];
    const double next = G.angles[order[(i + 1) % N]] + (i + 1 == N ? 2.0 * kPi : 0.0);
    if (next - here <= 2.0 * beta + 1e-12)
      throw GeometryError(
          "edge directions too close for the default junction polygon; "
          "pass a custom junction");
  }
  std::vector<Vec2> poly;
  poly.reserve(2 * N);
  for (int i : order) {
    poly.push_back(mouth_corner(G, eps0, l, i, -1));
    poly.push_back(mouth_corner(G, eps0, l, i, +1));
  }
  return poly;
}

std::vector<Vec2> tube_polygon(const MetricStarGraph& G, double eps, double l, int j) {
  const double lj = G.lengths[j];
  return {G.rotations[j] * Vec2(eps * l, -eps), G.rotations[j] * Vec2(lj, -eps),
          G.rotations[j] * Vec2(lj, eps), G.rotations[j] * Vec2(eps * l, eps)};
}

void validate_junction(const ThinDomainSpec& spec) {
  const MetricStarGraph& G = spec.graph;
  const std::vector<Vec2>& J = spec.junction;
  if (J.size() < 3) throw GeometryError("junction polygon needs at least 3 vertices");
  if (!polygon_simple(J)) throw GeometryError("junction polygon is self-intersecting");
  if (polygon_area(J) <= 0.0) throw GeometryError("junction polygon must be CCW with positive area");

  const double scale = spec.eps0 * std::hypot(spec.l, 1.0);
  const double tol = 1e-9 * scale;
  if (!point_in_polygon(Vec2(0, 0), J) || dist_point_polygon_boundary(Vec2(0, 0), J) <= tol)
    throw GeometryError("junction polygon must contain the origin strictly inside");

  // Every tube mouth must appear as one polygon edge (endpoints adjacent).
  const int n = static_cast<int>(J.size());
  for (int j = 0; j < G.edge_count(); ++j) {
    const Vec2 lo = mouth_corner(G, spec.eps0, spec.l, j, -1);
    const Vec2 hi = mouth_corner(G, spec.eps0, spec.l, j, +1);
    int ilo = -1, ihi = -1;
    for (int i = 0; i < n; ++i) {
      if ((J[i] - lo).norm() <= tol) ilo = i;
      if ((J[i] - hi).norm() <= tol) ihi = i;
    }
    if (ilo < 0 || ihi < 0 || (ilo + 1) % n != ihi)
      throw GeometryError("junction polygon does not contain tube mouth " + std::to_string(j) +
                          " as a boundary edge");
  }

  // Tube disjointness, checked at the widest width and at the actual one.
  for (double e : {spec.eps0, spec.eps}) {
    for (int i = 0; i < G.edge_count(); ++i)
      for (int j = i + 1; j < G.edge_count(); ++j)
        if (convex_interiors_overlap(tube_polygon(G, e, spec.l, i),
                                     tube_polygon(G, e, spec.l, j), tol))
          throw GeometryError("tubes " + std::to_string(i) + " and " + std::to_string(j) +
                              " overlap");
  }

  // Junction interior must not invade any tube (shared mouth edges are fine);
  // ear clipping handles non-convex custom polygons.
  const std::vector<std::array<int, 3>> tris = ear_clip(J);
  for (int j = 0; j < G.edge_count(); ++j) {
    const std::vector<Vec2> tube = tube_polygon(G, spec.eps0, spec.l, j);
    for (const auto& t : tris) {
      const std::vector<Vec2> tri = {J[t[0]], J[t[1]], J[t[2]]};
      if (convex_interiors_overlap(tri, tube, tol))
        throw GeometryError("junction polygon overlaps tube " + std::to_string(j));
    }
  }
}

}  // namespace

double ThinDomainSpec::junction_area_ref() const { return polygon_area(junction); }

double ThinDomainSpec::junction_area() const {
  const double r = eps / eps0;
  return r * r * junction_area_ref();
}

double ThinDomainSpec::tube_area(int j) const {
  return (graph.lengths[j] - eps * l) * 2.0 * eps;
}

std::vector<Vec2> ThinDomainSpec::junction_scaled() const {
  std::vector<Vec2> out = junction;
  const double r = eps / eps0;
  for (Vec2& v : out) v *= r;
  return out;
}

ThinDomainSpec build_thin_domain(const MetricStarGraph& G, double eps, double eps0, double l,
                                 const std::optional<std::vector<Vec2>>& junction,
                                 double a_param) {
  if (G.edge_count() < 1) throw DomainError("thin domain needs a graph with at least one edge");
  if (!(eps > 0.0) || !(eps <= eps0)) throw DomainError("require 0 < eps <= eps0");
  if (!(l > 0.0)) throw DomainError("junction half-extent l must be positive");
  const double a_hi = G.min_length() / eps0;
  if (!(l < a_hi))
    throw DomainError("require eps0 * l < min edge length (junction shorter than every tube)");

  ThinDomainSpec spec;
  spec.graph = G;
  spec.eps = eps;
  spec.eps0 = eps0;
  spec.l = l;
  spec.measure_weight = 1.0 / (kMeasureOmega * eps);
  if (a_param > 0.0) {
    if (!(a_param > l) || !(a_param < a_hi))
      throw DomainError("diagnostics constant a must satisfy l < a < min edge length / eps0");
    spec.a = a_param;
  } else {
    spec.a = std::min(2.0 * l, 0.5 * (l + a_hi));
  }

  if (junction) {
    spec.junction = *junction;
    ensure_ccw(spec.junction);
  } else {
    spec.junction = auto_junction(G, eps0, l);
  }
  validate_junction(spec);
  return spec;
}

GraphPoint project_in_junction(const Vec2& x, const ThinDomainSpec& spec) {
  const MetricStarGraph& G = spec.graph;
  const double mouth = spec.mouth_position();
  GraphPoint best{0, 0.0};
  double best_d = std::numeric_limits<double>::infinity();
  for (int j = 0; j < G.edge_count(); ++j) {
    const Vec2 y = G.rotations[j].transpose() * x;
    const double t = std::clamp(y.x(), 0.0, mouth);
    const double d = std::hypot(y.x() - t, y.y());
    if (d < best_d) {
      best_d = d;
      best = {j, t};
    }
  }
  return best;
}

GraphPoint project_to_graph(const Vec2& x, const ThinDomainSpec& spec) {
  const MetricStarGraph& G = spec.graph;
  constexpr double tol = 1e-12;
  const double mouth = spec.mouth_position();
  for (int j = 0; j < G.edge_count(); ++j) {
    const Vec2 y = G.rotations[j].transpose() * x;
    if (y.x() >= mouth - tol && y.x() <= G.lengths[j] + tol && std::abs(y.y()) <= spec.eps + tol)
      return {j, std::clamp(y.x(), 0.0, G.lengths[j])};
  }
  if (point_in_polygon(x, spec.junction_scaled(), tol)) return project_in_junction(x, spec);
  throw DomainError("point lies outside the thin domain");
}

double PotentialSpec::operator()(const Vec2& z) const {
  const double r = z.norm();
  if (r > rho) return 0.0;
  if (profile == PotentialProfile::Box) return v0;
  const double c = std::cos(kPi * r / (2.0 * rho));
  return v0 * c * c;
}

double scaled_potential(const Vec2& x, const ThinDomainSpec& spec, const PotentialSpec& V) {
  return V(x / spec.eps) / spec.eps;
}

double coupling_constant(const PotentialSpec& V) {
  if (V.v0 == 0.0) return 0.0;
  if (V.rho <= 0.0) throw DomainError("potential support radius must be positive");
  if (V.profile == PotentialProfile::Box)
    return 0.5 * V.v0 * kPi * V.rho * V.rho;  // discontinuous: integrate exactly
  // Radially symmetric profile: (1/2) int V = pi * int_0^rho V(r) r dr.
  const double raw = adaptive_simpson([&](double r) { return V(Vec2(r, 0.0)) * r; }, 0.0, V.rho,
                                      1e-13 * std::abs(V.v0) * V.rho * V.rho, 48);
  const double out = kPi * raw;
  if (!std::isfinite(out)) throw NumericsError("coupling quadrature diverged");
  return out;
}

double coupling_constant(const std::function<double(const Vec2&)>& V, double support_radius) {
  if (!(support_radius > 0.0)) throw DomainError("potential support radius must be positive");
  const double R = support_radius;
  // Tensorized adaptive Simpson over the bounding square of the support.
  double rough = 0.0;
  const int n = 33;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const Vec2 z(-R + 2.0 * R * (i + 0.5) / n, -R + 2.0 * R * (k + 0.5) / n);
      rough += std::abs(V(z)) * (2.0 * R / n) * (2.0 * R / n);
    }
  const double tol = 1e-11 * std::max(rough, 1e-20);
  const auto strip = [&](double x) {
    return adaptive_simpson([&](double y) { return V(Vec2(x, y)); }, -R, R, tol / (4.0 * R), 44);
  };
  const double out = 0.5 * adaptive_simpson(strip, -R, R, tol, 44);
  if (!std::isfinite(out)) throw NumericsError("coupling quadrature diverged");
  return out;
}

double solve_amplitude(PotentialProfile profile, double rho, double target_coupling) {
  if (target_coupling < 0.0) throw DomainError("coupling target must be nonnegative");
  if (target_coupling == 0.0) return 0.0;
  PotentialSpec probe{profile, rho, 1.0};
  const auto value = [&](double v0) {
    probe.v0 = v0;
    return coupling_constant(probe);
  };
  double hi = 1.0;
  int guard = 0;
  while (value(hi) < target_coupling) {
    hi *= 2.0;
    if (++guard > 200) throw NumericsError("amplitude calibration failed to bracket the target");
  }
  double lo = 0.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (value(mid) < target_coupling)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-15 * hi) break;
  }
  return 0.5 * (lo + hi);
}

void validate_potential_support(const PotentialSpec& V, const ThinDomainSpec& spec) {
  if (V.v0 < 0.0) throw DomainError("potential amplitude must be nonnegative");
  if (V.v0 == 0.0) return;
  std::vector<Vec2> big = spec.junction;  // (1/eps0) * J
  for (Vec2& v : big) v /= spec.eps0;
  if (!point_in_polygon(Vec2(0, 0), big) ||
      dist_point_polygon_boundary(Vec2(0, 0), big) < V.rho - 1e-12)
    throw DomainError("potential support ball does not fit inside the rescaled junction");
}

double measure_total(const ThinDomainSpec& spec) {
  double out = spec.junction_area() * spec.measure_weight;
  for (int j = 0; j < spec.graph.edge_count(); ++j)
    out += spec.graph.lengths[j] - spec.eps * spec.l;
  return out;
}

double gh_measure_error(const ThinDomainSpec& spec,
                        const std::function<double(int, double)>& psi) {
  const MetricStarGraph& G = spec.graph;
  double domain_side = 0.0;
  double graph_side = 0.0;
  for (int j = 0; j < G.edge_count(); ++j) {
    const double lj = G.lengths[j];
    const double tol = 1e-12 * std::max(1.0, lj);
    // Tube integrand is constant across the width, so the weight cancels.
    domain_side += adaptive_simpson([&](double s) { return psi(j, s); },
                                    spec.mouth_position(), lj, tol, 48);
    graph_side += adaptive_simpson([&](double s) { return psi(j, s); }, 0.0, lj, tol, 48);
  }
  const std::vector<Vec2> Je = spec.junction_scaled();
  const std::vector<std::array<int, 3>> tris = ear_clip(Je);
  const auto integrand = [&](const Vec2& x) {
    const GraphPoint p = project_in_junction(x, spec);
    return psi(p.edge, p.s);
  };
  // The projection map kinks along the sector bisectors, which the adaptive
  // rule resolves by local refinement; equidistributing the error budget by
  // triangle area keeps that refinement from chasing precision far below the
  // O(eps) defect this function measures.
  double junction_integral = 0.0;
  for (const auto& t : tris) {
    const double area = 0.5 * std::abs(cross2(Je[t[1]] - Je[t[0]], Je[t[2]] - Je[t[0]]));
    const double tol = std::max(1e-8 * area, 1e-15);
    junction_integral += adaptive_triangle(integrand, Je[t[0]], Je[t[1]], Je[t[2]], tol, 20);
  }
  domain_side += junction_integral * spec.measure_weight;
  return std::abs(domain_side - graph_side);
}

}  // namespace t2g
