#include "t2g/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "t2g/errors.hpp"

namespace t2g {

double polygon_area(const std::vector<Vec2>& poly) {
  const int n = static_cast<int>(poly.size());
  double twice = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % n];
    twice += cross2(p, q);
  }
  return 0.5 * twice;
}

void ensure_ccw(std::vector<Vec2>& poly) {
  if (polygon_area(poly) < 0.0) std::reverse(poly.begin(), poly.end());
}

double dist_point_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  double t = (p - a).dot(ab) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

double dist_point_polygon_boundary(const Vec2& p, const std::vector<Vec2>& poly) {
  const int n = static_cast<int>(poly.size());
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    best = std::min(best, dist_point_segment(p, poly[i], poly[(i + 1) % n]));
  return best;
}

bool point_in_polygon(const Vec2& p, const std::vector<Vec2>& poly, double tol) {
  if (tol > 0.0 && dist_point_polygon_boundary(p, poly) <= tol) return true;
  // Crossing-number test with a horizontal ray.
  const int n = static_cast<int>(poly.size());
  bool inside = false;
  for (int i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[j];
    const bool straddles = (a.y() > p.y()) != (b.y() > p.y());
    if (straddles) {
      const double x_cross = a.x() + (p.y() - a.y()) / (b.y() - a.y()) * (b.x() - a.x());
      if (p.x() < x_cross) inside = !inside;
    }
  }
  return inside;
}

namespace {

int orientation_sign(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double v = cross2(b - a, c - a);
  const double scale = (b - a).norm() * (c - a).norm();
  if (std::abs(v) <= 1e-15 * std::max(1.0, scale)) return 0;
  return v > 0 ? 1 : -1;
}

}  // namespace

bool segments_cross(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const int o1 = orientation_sign(a, b, c);
  const int o2 = orientation_sign(a, b, d);
  const int o3 = orientation_sign(c, d, a);
  const int o4 = orientation_sign(c, d, b);
  return o1 * o2 < 0 && o3 * o4 < 0;
}

bool polygon_simple(const std::vector<Vec2>& poly) {
  const int n = static_cast<int>(poly.size());
  if (n < 3) return false;
  for (int i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    if ((b - a).norm() == 0.0) return false;
    for (int j = i + 1; j < n; ++j) {
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;  // adjacent
      if (segments_cross(a, b, poly[j], poly[(j + 1) % n])) return false;
    }
  }
  return true;
}

bool polygon_star_shaped_from(const std::vector<Vec2>& poly, const Vec2& o) {
  // For a CCW polygon, o sees every edge iff it lies strictly left of each
  // directed edge; equivalently every fan triangle (o, a, b) has positive area.
  const int n = static_cast<int>(poly.size());
  for (int i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    if (cross2(b - a, o - a) <= 0.0) return false;
  }
  return true;
}

bool convex_interiors_overlap(const std::vector<Vec2>& a, const std::vector<Vec2>& b, double tol) {
  // Separating axis theorem: check the edge normals of both polygons.
  const auto separated_on = [&](const std::vector<Vec2>& poly) {
    const int n = static_cast<int>(poly.size());
    for (int i = 0; i < n; ++i) {
      const Vec2 edge = poly[(i + 1) % n] - poly[i];
      const Vec2 axis(-edge.y(), edge.x());
      double amin = std::numeric_limits<double>::infinity(), amax = -amin;
      for (const Vec2& p : a) {
        const double v = axis.dot(p);
        amin = std::min(amin, v);
        amax = std::max(amax, v);
      }
      double bmin = std::numeric_limits<double>::infinity(), bmax = -bmin;
      for (const Vec2& p : b) {
        const double v = axis.dot(p);
        bmin = std::min(bmin, v);
        bmax = std::max(bmax, v);
      }
      const double scale = axis.norm();
      if (amax - bmin <= tol * scale || bmax - amin <= tol * scale) return true;
    }
    return false;
  };
  return !(separated_on(a) || separated_on(b));
}

std::vector<Vec2> clip_halfplane(const std::vector<Vec2>& poly, const Vec2& n, double c) {
  std::vector<Vec2> out;
  const int m = static_cast<int>(poly.size());
  for (int i = 0; i < m; ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % m];
    const double dp = n.dot(p) - c;
    const double dq = n.dot(q) - c;
    if (dp <= 0.0) out.push_back(p);
    if ((dp < 0.0 && dq > 0.0) || (dp > 0.0 && dq < 0.0)) {
      const double t = dp / (dp - dq);
      out.push_back(p + t * (q - p));
    }
  }
  return out;
}

std::vector<std::array<int, 3>> ear_clip(const std::vector<Vec2>& poly) {
  const int n = static_cast<int>(poly.size());
  if (n < 3) throw GeometryError("ear clipping needs at least 3 vertices");
  if (!(polygon_area(poly) > 0.0))
    throw GeometryError("ear clipping needs a CCW polygon with positive area");
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;

  // Closed-triangle test: a vertex sitting exactly on the candidate diagonal
  // must block the ear, otherwise the cut pinches the remaining polygon.
  const auto in_closed_tri = [](const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c) {
    const double d1 = cross2(b - a, p - a);
    const double d2 = cross2(c - b, p - b);
    const double d3 = cross2(a - c, p - c);
    return d1 >= 0 && d2 >= 0 && d3 >= 0;
  };

  std::vector<std::array<int, 3>> tris;
  int guard = 0;
  while (idx.size() > 3) {
    if (++guard > 4 * n * n) throw GeometryError("ear clipping failed; polygon may not be simple");
    const int m = static_cast<int>(idx.size());
    bool clipped = false;
    int flat = -1;  // exactly collinear corner: removable, nothing to emit
    for (int i = 0; i < m; ++i) {
      const int ia = idx[(i + m - 1) % m], ib = idx[i], ic = idx[(i + 1) % m];
      const Vec2 &a = poly[ia], &b = poly[ib], &c = poly[ic];
      const double turn = cross2(b - a, c - a);
      if (turn < 0.0) continue;  // reflex corner
      if (turn == 0.0) {
        if (flat < 0) flat = i;
        continue;
      }
      bool blocked = false;
      for (int v : idx) {
        if (v == ia || v == ib || v == ic) continue;
        if (in_closed_tri(poly[v], a, b, c)) {
          blocked = true;
          break;
        }
      }
      if (blocked) continue;
      tris.push_back({ia, ib, ic});
      idx.erase(idx.begin() + i);
      clipped = true;
      break;
    }
    if (!clipped) {
      if (flat < 0) throw GeometryError("ear clipping found no ear; polygon may not be simple");
      idx.erase(idx.begin() + flat);
    }
  }
  // The remainder is flat exactly when the clipped ears already cover the
  // full area; an inverted remainder means the input was not simple.
  const double last = cross2(poly[idx[1]] - poly[idx[0]], poly[idx[2]] - poly[idx[0]]);
  if (last < 0.0) throw GeometryError("ear clipping failed; polygon may not be simple");
  if (last > 0.0) tris.push_back({idx[0], idx[1], idx[2]});
  return tris;
}

}  // namespace t2g
