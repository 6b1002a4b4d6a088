#include "t2g/mesh2d.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace t2g {

namespace {

// Node store with tolerance-based deduplication on a quantized grid: the tube
// grids and the refined junction generate interface nodes through different
// arithmetic, so equality is "within q", not bitwise. q is far below any node
// spacing and far above accumulated rounding, so the match is unambiguous.
class NodeStore {
 public:
  explicit NodeStore(double q) : q_(q) {}

  int add(const Vec2& p, std::vector<Vec2>& nodes) {
    const long long kx = static_cast<long long>(std::floor(p.x() / q_));
    const long long ky = static_cast<long long>(std::floor(p.y() / q_));
    int best = -1;
    double best_d = q_;
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy = -1; dy <= 1; ++dy) {
        const auto it = buckets_.find({kx + dx, ky + dy});
        if (it == buckets_.end()) continue;
        for (int idx : it->second) {
          const double d = (nodes[idx] - p).norm();
          if (d < best_d || (d == best_d && best >= 0 && idx < best)) {
            best_d = d;
            best = idx;
          }
        }
      }
    if (best >= 0) return best;
    const int idx = static_cast<int>(nodes.size());
    nodes.push_back(p);
    buckets_[{kx, ky}].push_back(idx);
    return idx;
  }

 private:
  double q_;
  std::map<std::pair<long long, long long>, std::vector<int>> buckets_;
};

void append_tube(NodeStore& store, Mesh2D& mesh, const Eigen::Matrix2d& R, double y1_lo,
                 double y1_hi, double half_width, int nx, int ny, int region_tag,
                 bool mouth_is_boundary) {
  std::vector<int> grid((nx + 1) * (ny + 1));
  const auto at = [&](int ix, int iy) -> int& { return grid[ix * (ny + 1) + iy]; };
  for (int ix = 0; ix <= nx; ++ix) {
    const double y1 = (ix == nx) ? y1_hi : y1_lo + ix * (y1_hi - y1_lo) / nx;
    for (int iy = 0; iy <= ny; ++iy) {
      const double y2 =
          (iy == ny) ? half_width : -half_width + iy * (2.0 * half_width) / ny;
      at(ix, iy) = store.add(R * Vec2(y1, y2), mesh.nodes);
    }
  }
  for (int ix = 0; ix < nx; ++ix)
    for (int iy = 0; iy < ny; ++iy) {
      const int n00 = at(ix, iy), n10 = at(ix + 1, iy);
      const int n01 = at(ix, iy + 1), n11 = at(ix + 1, iy + 1);
      mesh.triangles.push_back({n00, n10, n11});
      mesh.triangles.push_back({n00, n11, n01});
      mesh.region.push_back(region_tag);
      mesh.region.push_back(region_tag);
    }
  for (int iy = 0; iy < ny; ++iy) {
    mesh.boundary.push_back({at(nx, iy), at(nx, iy + 1), region_tag});  // outer face
    if (mouth_is_boundary) mesh.boundary.push_back({at(0, iy), at(0, iy + 1), kSigmaBoundary});
  }
  for (int ix = 0; ix < nx; ++ix) {
    mesh.boundary.push_back({at(ix, 0), at(ix + 1, 0), kSigmaBoundary});  // side walls
    mesh.boundary.push_back({at(ix, ny), at(ix + 1, ny), kSigmaBoundary});
  }
}

void append_refined_triangle(NodeStore& store, Mesh2D& mesh, const Vec2& A, const Vec2& B,
                             const Vec2& C, int L) {
  std::vector<int> node((L + 1) * (L + 2) / 2);
  const auto slot = [&](int i, int k) -> int& {
    // Rows k = 0..L, row k holds i = 0..L-k.
    return node[k * (L + 1) - k * (k - 1) / 2 + i];
  };
  for (int k = 0; k <= L; ++k)
    for (int i = 0; i + k <= L; ++i)
      slot(i, k) = store.add(A + (double(i) / L) * (B - A) + (double(k) / L) * (C - A),
                             mesh.nodes);
  for (int k = 0; k < L; ++k)
    for (int i = 0; i + k < L; ++i) {
      mesh.triangles.push_back({slot(i, k), slot(i + 1, k), slot(i, k + 1)});
      mesh.region.push_back(kJunctionRegion);
      if (i + k < L - 1) {
        mesh.triangles.push_back({slot(i + 1, k), slot(i + 1, k + 1), slot(i, k + 1)});
        mesh.region.push_back(kJunctionRegion);
      }
    }
}

}  // namespace

double Mesh2D::tri_area(int t) const {
  const auto& tr = triangles[t];
  return 0.5 * cross2(nodes[tr[1]] - nodes[tr[0]], nodes[tr[2]] - nodes[tr[0]]);
}

double Mesh2D::region_area(int tag) const {
  double a = 0.0;
  for (int t = 0; t < tri_count(); ++t)
    if (region[t] == tag) a += tri_area(t);
  return a;
}

std::vector<std::array<Vec2, 3>> junction_coarse_triangles(const ThinDomainSpec& spec) {
  const std::vector<Vec2> J = spec.junction_scaled();
  std::vector<std::array<Vec2, 3>> out;
  if (polygon_star_shaped_from(J, Vec2(0, 0))) {
    const int n = static_cast<int>(J.size());
    for (int i = 0; i < n; ++i) out.push_back({Vec2(0, 0), J[i], J[(i + 1) % n]});
  } else {
    for (const auto& t : ear_clip(J)) out.push_back({J[t[0]], J[t[1]], J[t[2]]});
  }
  return out;
}

Mesh2D triangulate(const ThinDomainSpec& spec, double h, int transversal_layers) {
  if (!(h > 0.0) || h > spec.eps + 1e-15)
    throw MeshError("mesh size must satisfy 0 < h <= eps");
  if (transversal_layers < 2) throw MeshError("need at least 2 transversal layers");
  const MetricStarGraph& G = spec.graph;
  const int L = transversal_layers;

  Mesh2D mesh;
  NodeStore store(1e-9 * spec.eps);
  for (int j = 0; j < G.edge_count(); ++j) {
    const double len = G.lengths[j] - spec.mouth_position();
    const int nx = std::max(1, static_cast<int>(std::ceil(len / h - 1e-9)));
    append_tube(store, mesh, G.rotations[j], spec.mouth_position(), G.lengths[j], spec.eps, nx,
                L, j, /*mouth_is_boundary=*/false);
  }

  for (const auto& tri : junction_coarse_triangles(spec))
    append_refined_triangle(store, mesh, tri[0], tri[1], tri[2], L);

  // Junction boundary: subdivided polygon edges that are not tube mouths.
  const std::vector<Vec2> J = spec.junction_scaled();
  const int n = static_cast<int>(J.size());
  const double tol = 1e-9 * spec.eps;
  std::vector<bool> is_mouth(n, false);
  for (int j = 0; j < G.edge_count(); ++j) {
    const Vec2 lo = G.rotations[j] * Vec2(spec.mouth_position(), -spec.eps);
    for (int i = 0; i < n; ++i)
      if ((J[i] - lo).norm() <= tol) is_mouth[i] = true;
  }
  for (int i = 0; i < n; ++i) {
    if (is_mouth[i]) continue;
    const Vec2 &P = J[i], &Q = J[(i + 1) % n];
    int prev = store.add(P, mesh.nodes);
    for (int k = 1; k <= L; ++k) {
      const int next = store.add(P + (double(k) / L) * (Q - P), mesh.nodes);
      mesh.boundary.push_back({prev, next, kSigmaBoundary});
      prev = next;
    }
  }
  return mesh;
}

MeshQuality mesh_quality(const Mesh2D& mesh) {
  MeshQuality q;
  q.n_nodes = mesh.node_count();
  q.n_tris = mesh.tri_count();
  q.min_angle_deg = 180.0;
  q.max_aspect = 0.0;
  for (const auto& t : mesh.triangles) {
    const Vec2 e[3] = {mesh.nodes[t[1]] - mesh.nodes[t[0]], mesh.nodes[t[2]] - mesh.nodes[t[1]],
                       mesh.nodes[t[0]] - mesh.nodes[t[2]]};
    double lo = 1e300, hi = 0.0;
    for (int i = 0; i < 3; ++i) {
      const Vec2 u = -e[(i + 2) % 3], v = e[i];
      const double ang = std::atan2(std::abs(cross2(u, v)), u.dot(v));
      q.min_angle_deg = std::min(q.min_angle_deg, ang * 180.0 / 3.14159265358979323846);
      lo = std::min(lo, e[i].norm());
      hi = std::max(hi, e[i].norm());
    }
    q.max_aspect = std::max(q.max_aspect, hi / lo);
  }
  return q;
}

void validate_mesh(const Mesh2D& mesh, double min_angle_deg) {
  if (mesh.tri_count() == 0) throw MeshError("mesh has no triangles");
  if (static_cast<int>(mesh.region.size()) != mesh.tri_count())
    throw MeshError("region tags do not match triangle count");
  std::map<std::pair<int, int>, int> edge_use;
  std::vector<bool> used(mesh.node_count(), false);
  for (int t = 0; t < mesh.tri_count(); ++t) {
    const auto& tr = mesh.triangles[t];
    for (int v : tr) {
      if (v < 0 || v >= mesh.node_count()) throw MeshError("triangle vertex index out of range");
      used[v] = true;
    }
    if (mesh.tri_area(t) <= 0.0)
      throw MeshError("triangle " + std::to_string(t) + " is degenerate or misoriented");
    for (int i = 0; i < 3; ++i) {
      const int a = tr[i], b = tr[(i + 1) % 3];
      ++edge_use[{std::min(a, b), std::max(a, b)}];
    }
  }
  for (bool u : used)
    if (!u) throw MeshError("mesh contains an orphan node");

  std::set<std::pair<int, int>> topo_boundary;
  for (const auto& [e, cnt] : edge_use) {
    if (cnt > 2) throw MeshError("edge shared by more than two triangles (non-manifold)");
    if (cnt == 1) topo_boundary.insert(e);
  }
  std::set<std::pair<int, int>> listed;
  for (const auto& be : mesh.boundary)
    listed.insert({std::min(be.a, be.b), std::max(be.a, be.b)});
  if (listed != topo_boundary)
    throw MeshError("stored boundary does not match the topological boundary (hanging interface nodes?)");

  // Triangulated disk: V - E + F = 1.
  const long euler = static_cast<long>(mesh.node_count()) -
                     static_cast<long>(edge_use.size()) + mesh.tri_count();
  if (euler != 1) throw MeshError("mesh is not a triangulated disk (Euler characteristic " +
                                  std::to_string(euler) + ")");

  const MeshQuality q = mesh_quality(mesh);
  if (q.min_angle_deg < min_angle_deg)
    throw MeshError("minimum triangle angle " + std::to_string(q.min_angle_deg) +
                    " deg below the floor " + std::to_string(min_angle_deg));
}

std::string mesh_to_text(const Mesh2D& mesh) {
  std::string out;
  char buf[128];
  std::snprintf(buf, sizeof buf, "%d\n", mesh.node_count());
  out += buf;
  for (const Vec2& p : mesh.nodes) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", p.x(), p.y());
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "%d\n", mesh.tri_count());
  out += buf;
  for (int t = 0; t < mesh.tri_count(); ++t) {
    const auto& tr = mesh.triangles[t];
    std::snprintf(buf, sizeof buf, "%d %d %d %d\n", tr[0], tr[1], tr[2], mesh.region[t]);
    out += buf;
  }
  return out;
}

Mesh2D mesh_from_text(const std::string& text) {
  std::istringstream in(text);
  Mesh2D mesh;
  int nn = 0;
  if (!(in >> nn) || nn < 3) throw MeshError("mesh text: bad node count");
  mesh.nodes.resize(nn);
  for (Vec2& p : mesh.nodes)
    if (!(in >> p.x() >> p.y())) throw MeshError("mesh text: truncated node list");
  int nt = 0;
  if (!(in >> nt) || nt < 1) throw MeshError("mesh text: bad triangle count");
  mesh.triangles.resize(nt);
  mesh.region.resize(nt);
  for (int t = 0; t < nt; ++t) {
    auto& tr = mesh.triangles[t];
    if (!(in >> tr[0] >> tr[1] >> tr[2] >> mesh.region[t]))
      throw MeshError("mesh text: truncated triangle list");
  }
  std::map<std::pair<int, int>, int> edge_use;
  for (const auto& tr : mesh.triangles)
    for (int i = 0; i < 3; ++i) {
      const int a = tr[i], b = tr[(i + 1) % 3];
      if (a < 0 || b < 0 || a >= nn || b >= nn) throw MeshError("mesh text: vertex out of range");
      ++edge_use[{std::min(a, b), std::max(a, b)}];
    }
  for (const auto& [e, cnt] : edge_use)
    if (cnt == 1) mesh.boundary.push_back({e.first, e.second, kSigmaBoundary});
  return mesh;
}

Mesh2D structured_tube_mesh(const Eigen::Matrix2d& R, double y1_lo, double y1_hi,
                            double half_width, int nx, int ny, int region_tag) {
  if (!(y1_hi > y1_lo) || !(half_width > 0.0) || nx < 1 || ny < 1)
    throw MeshError("invalid structured tube parameters");
  Mesh2D mesh;
  NodeStore store(1e-9 * std::min(half_width, y1_hi - y1_lo));
  append_tube(store, mesh, R, y1_lo, y1_hi, half_width, nx, ny, region_tag,
              /*mouth_is_boundary=*/true);
  return mesh;
}

}  // namespace t2g
