#include <algorithm>
#include <array>
#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "t2g/errors.hpp"
#include "t2g/geometry.hpp"

using namespace t2g;

namespace {

std::vector<Vec2> unit_square() { return {{0, 0}, {1, 0}, {1, 1}, {0, 1}}; }

std::vector<Vec2> regular_polygon(int n, double r, double phase = 0.0) {
  std::vector<Vec2> p;
  for (int i = 0; i < n; ++i) {
    const double t = phase + 2.0 * M_PI * i / n;
    p.emplace_back(r * std::cos(t), r * std::sin(t));
  }
  return p;
}

double tri_area(const std::vector<Vec2>& poly, const std::array<int, 3>& t) {
  return 0.5 * cross2(poly[t[1]] - poly[t[0]], poly[t[2]] - poly[t[0]]);
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("signed polygon area and orientation") {
  auto sq = unit_square();
  CHECK(polygon_area(sq) == doctest::Approx(1.0).epsilon(1e-15));
  std::reverse(sq.begin(), sq.end());
  CHECK(polygon_area(sq) == doctest::Approx(-1.0).epsilon(1e-15));
  ensure_ccw(sq);
  CHECK(polygon_area(sq) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("point-segment distance covers endpoint and interior projections") {
  const Vec2 a(0, 0), b(2, 0);
  CHECK(dist_point_segment({1, 1}, a, b) == doctest::Approx(1.0));
  CHECK(dist_point_segment({-3, 4}, a, b) == doctest::Approx(5.0));
  CHECK(dist_point_segment({5, 4}, a, b) == doctest::Approx(5.0));
  CHECK(dist_point_segment({1.5, 0}, a, b) == doctest::Approx(0.0));
  // degenerate segment = point distance
  CHECK(dist_point_segment({3, 4}, a, a) == doctest::Approx(5.0));
}

TEST_CASE("point in polygon with boundary tolerance") {
  const auto sq = unit_square();
  CHECK(point_in_polygon({0.5, 0.5}, sq));
  CHECK_FALSE(point_in_polygon({1.5, 0.5}, sq));
  CHECK_FALSE(point_in_polygon({1.0 + 1e-9, 0.5}, sq));
  CHECK(point_in_polygon({1.0 + 1e-9, 0.5}, sq, 1e-8));
  CHECK(point_in_polygon({0.0, 0.0}, sq, 1e-12));  // corner counts as inside
}

TEST_CASE("proper segment crossing excludes shared endpoints") {
  CHECK(segments_cross({0, 0}, {1, 1}, {0, 1}, {1, 0}));
  CHECK_FALSE(segments_cross({0, 0}, {1, 1}, {1, 1}, {2, 0}));   // shared endpoint
  CHECK_FALSE(segments_cross({0, 0}, {1, 0}, {0, 1}, {1, 1}));   // parallel
  CHECK_FALSE(segments_cross({0, 0}, {1, 0}, {2, -1}, {2, 1}));  // disjoint
}

TEST_CASE("simplicity: bowtie rejected, convex accepted") {
  CHECK(polygon_simple(unit_square()));
  const std::vector<Vec2> bowtie{{0, 0}, {1, 1}, {1, 0}, {0, 1}};
  CHECK_FALSE(polygon_simple(bowtie));
}

TEST_CASE("star-shaped test matches fan-triangulation validity") {
  CHECK(polygon_star_shaped_from(unit_square(), {0.5, 0.5}));
  CHECK_FALSE(polygon_star_shaped_from(unit_square(), {1.5, 0.5}));
  // L-shape: kernel is the lower-left quadrant square
  const std::vector<Vec2> ell{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
  CHECK(polygon_star_shaped_from(ell, {0.5, 0.5}));
  CHECK_FALSE(polygon_star_shaped_from(ell, {1.5, 1.75}));
}

TEST_CASE("convex overlap via separating axes") {
  const auto a = unit_square();
  std::vector<Vec2> b;
  for (const Vec2& p : unit_square()) b.push_back(p + Vec2(0.5, 0.5));
  CHECK(convex_interiors_overlap(a, b));
  b.clear();
  for (const Vec2& p : unit_square()) b.push_back(p + Vec2(1.0, 0.0));
  CHECK_FALSE(convex_interiors_overlap(a, b));  // touching edge, no interior overlap
  b.clear();
  for (const Vec2& p : unit_square()) b.push_back(p + Vec2(2.0, 2.0));
  CHECK_FALSE(convex_interiors_overlap(a, b));
}

TEST_CASE("half-plane clip keeps the correct part") {
  const auto clipped = clip_halfplane(unit_square(), {1, 0}, 0.5);  // x <= 0.5
  CHECK(polygon_area(clipped) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(clip_halfplane(unit_square(), {1, 0}, -1.0).size() < 3);  // fully outside
  CHECK(polygon_area(clip_halfplane(unit_square(), {1, 0}, 2.0)) ==
        doctest::Approx(1.0).epsilon(1e-14));  // fully inside
}

TEST_CASE("ear clipping covers the polygon exactly") {
  const std::vector<Vec2> ell{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
  const auto tris = ear_clip(ell);
  CHECK(tris.size() == ell.size() - 2);
  double total = 0.0;
  for (const auto& t : tris) {
    const double a = tri_area(ell, t);
    CHECK(a > 0.0);
    total += a;
  }
  CHECK(total == doctest::Approx(polygon_area(ell)).epsilon(1e-14));
}

TEST_CASE("ear clipping rejects degenerate input") {
  CHECK_THROWS_AS(ear_clip({{0, 0}, {1, 0}}), GeometryError);
  CHECK_THROWS_AS(ear_clip({{0, 0}, {1, 0}, {2, 0}}), GeometryError);  // collinear
}

TEST_CASE("property: random star polygons ear-clip to their area") {
  for (int trial = 0; trial < 25; ++trial) {
    const int n = t2g_test::uniform_int(4, 12);
    std::vector<Vec2> poly;
    for (int i = 0; i < n; ++i) {
      const double t = 2.0 * M_PI * i / n;
      const double r = t2g_test::uniform(0.4, 1.0);
      poly.emplace_back(r * std::cos(t), r * std::sin(t));
    }
    REQUIRE(polygon_simple(poly));
    REQUIRE(polygon_star_shaped_from(poly, {0, 0}));
    double total = 0.0;
    for (const auto& t : ear_clip(poly)) total += tri_area(poly, t);
    CHECK(total == doctest::Approx(polygon_area(poly)).epsilon(1e-12));
  }
}

TEST_CASE("property: clipping a convex polygon never grows area") {
  for (int trial = 0; trial < 25; ++trial) {
    const auto poly = regular_polygon(t2g_test::uniform_int(3, 9), 1.0,
                                      t2g_test::uniform(0.0, 1.0));
    const double base = polygon_area(poly);
    const double ang = t2g_test::uniform(0.0, 2 * M_PI);
    const Vec2 n(std::cos(ang), std::sin(ang));
    const double c = t2g_test::uniform(-1.2, 1.2);
    const auto clipped = clip_halfplane(poly, n, c);
    const double a = clipped.size() >= 3 ? polygon_area(clipped) : 0.0;
    CHECK(a <= base + 1e-12);
    CHECK(a >= -1e-12);
  }
}

}  // TEST_SUITE
