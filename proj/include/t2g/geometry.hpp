#pragma once

// Small planar-geometry toolbox: signed areas, point/segment/polygon
// predicates and half-plane clipping. Everything works on simple polygons
// given as CCW vertex lists.

#include <vector>

#include <Eigen/Dense>

namespace t2g {

using Vec2 = Eigen::Vector2d;

inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

// Signed area, positive for counter-clockwise orientation.
double polygon_area(const std::vector<Vec2>& poly);

void ensure_ccw(std::vector<Vec2>& poly);

double dist_point_segment(const Vec2& p, const Vec2& a, const Vec2& b);

double dist_point_polygon_boundary(const Vec2& p, const std::vector<Vec2>& poly);

// Inside-or-on test; points within `tol` of the boundary count as inside.
bool point_in_polygon(const Vec2& p, const std::vector<Vec2>& poly, double tol = 0.0);

// Proper crossing of open segments (shared endpoints do not count).
bool segments_cross(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d);

bool polygon_simple(const std::vector<Vec2>& poly);

// True when every vertex is visible from `o`, i.e. o lies in the kernel.
// Fan triangulation from `o` is valid exactly in this case.
bool polygon_star_shaped_from(const std::vector<Vec2>& poly, const Vec2& o);

// Separating-axis overlap test for two convex CCW polygons. Returns true when
// the interiors overlap by more than `tol` along every axis.
bool convex_interiors_overlap(const std::vector<Vec2>& a, const std::vector<Vec2>& b,
                              double tol = 1e-14);

// Keep the part of `poly` with n.dot(x) <= c (Sutherland-Hodgman, one plane).
std::vector<Vec2> clip_halfplane(const std::vector<Vec2>& poly, const Vec2& n, double c);

// Ear-clipping triangulation of a simple CCW polygon; returns vertex index
// triples. Throws GeometryError when the polygon is degenerate.
std::vector<std::array<int, 3>> ear_clip(const std::vector<Vec2>& poly);

}  // namespace t2g
