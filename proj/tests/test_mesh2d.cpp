#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "t2g/errors.hpp"
#include "t2g/mesh2d.hpp"

using namespace t2g;

namespace {

MetricStarGraph equilateral(int n) {
  std::vector<double> lengths(n, 1.0), angles;
  for (int j = 0; j < n; ++j) angles.push_back(2 * M_PI * j / n);
  return build_star(lengths, angles);
}

}  // namespace

TEST_SUITE("mesh2d") {

TEST_CASE("structured tube: cell grid with two triangles per cell") {
  Eigen::Matrix2d R = Eigen::Matrix2d::Identity();
  const auto m = structured_tube_mesh(R, 0.1, 1.0, 0.1, 18, 4, 0);
  CHECK(m.node_count() == 19 * 5);
  CHECK(m.tri_count() == 18 * 4 * 2);
  double area = 0.0;
  for (int t = 0; t < m.tri_count(); ++t) {
    CHECK(m.tri_area(t) > 0.0);  // consistent CCW orientation
    area += m.tri_area(t);
  }
  CHECK(area == doctest::Approx(0.9 * 0.2).epsilon(1e-13));
}

TEST_CASE("tube mesh respects the rotation") {
  Eigen::Matrix2d R;
  const double th = 2.0;
  R << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  const auto m = structured_tube_mesh(R, 0.2, 1.4, 0.05, 12, 2, 3);
  CHECK(m.region_area(3) == doctest::Approx(1.2 * 0.1).epsilon(1e-13));
  // all nodes pull back into the axis-aligned box
  for (const Vec2& x : m.nodes) {
    const Vec2 y = R.transpose() * x;
    CHECK(y.x() >= 0.2 - 1e-12);
    CHECK(y.x() <= 1.4 + 1e-12);
    CHECK(std::abs(y.y()) <= 0.05 + 1e-12);
  }
}

TEST_CASE("full 3-star mesh passes validation with exact region areas") {
  const auto spec = build_thin_domain(equilateral(3), 0.1);
  const auto mesh = triangulate(spec, 0.025, 8);
  validate_mesh(mesh);
  for (int j = 0; j < 3; ++j)
    CHECK(mesh.region_area(j) == doctest::Approx(spec.tube_area(j)).epsilon(1e-12));
  CHECK(mesh.region_area(kJunctionRegion) ==
        doctest::Approx(spec.junction_area()).epsilon(1e-12));
  const auto q = mesh_quality(mesh);
  CHECK(q.min_angle_deg >= 30.0 - 1e-9);
  CHECK(q.max_aspect <= 2.0);
}

TEST_CASE("two-edge mesh is a structured rectangle strip: 45 degree angles") {
  const auto spec = build_thin_domain(build_star({1, 1}, {0, M_PI}), 0.1);
  const auto mesh = triangulate(spec, 0.025, 8);
  validate_mesh(mesh);
  const auto q = mesh_quality(mesh);
  CHECK(q.min_angle_deg == doctest::Approx(45.0).epsilon(1e-12));
  CHECK(q.max_aspect == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("tube and junction share the mouth nodes") {
  const auto spec = build_thin_domain(equilateral(3), 0.1);
  const int layers = 8;
  const auto mesh = triangulate(spec, 0.025, layers);
  // nodes used by both a tube triangle and a junction triangle
  std::set<int> tube_nodes, junction_nodes;
  for (int t = 0; t < mesh.tri_count(); ++t)
    for (int v : mesh.triangles[t])
      (mesh.region[t] == kJunctionRegion ? junction_nodes : tube_nodes).insert(v);
  std::vector<int> shared;
  std::set_intersection(tube_nodes.begin(), tube_nodes.end(), junction_nodes.begin(),
                        junction_nodes.end(), std::back_inserter(shared));
  // exactly layers + 1 interface nodes per mouth, one mouth per edge
  CHECK(static_cast<int>(shared.size()) == 3 * (layers + 1));
  // every shared node sits on some mouth segment: distance eps*l from O along
  // an edge direction, transversal offset within eps
  for (int v : shared) {
    const Vec2 x = mesh.nodes[v];
    bool on_some_mouth = false;
    for (int j = 0; j < 3; ++j) {
      const Vec2 y = spec.graph.rotations[j].transpose() * x;
      if (std::abs(y.x() - spec.mouth_position()) < 1e-12 &&
          y.y() < spec.eps + 1e-12 && y.y() > -spec.eps - 1e-12)
        on_some_mouth = true;
    }
    CHECK(on_some_mouth);
  }
}

TEST_CASE("mesh text round trip is bit-exact") {
  const auto spec = build_thin_domain(equilateral(3), 0.2);
  const auto mesh = triangulate(spec, 0.05, 4);
  const std::string text = mesh_to_text(mesh);
  const auto back = mesh_from_text(text);
  REQUIRE(back.node_count() == mesh.node_count());
  REQUIRE(back.tri_count() == mesh.tri_count());
  for (int i = 0; i < mesh.node_count(); ++i) {
    CHECK(back.nodes[i].x() == mesh.nodes[i].x());
    CHECK(back.nodes[i].y() == mesh.nodes[i].y());
  }
  CHECK(back.region == mesh.region);
  CHECK(mesh_to_text(back) == text);
  validate_mesh(back);
}

TEST_CASE("repeated triangulation is deterministic") {
  const auto spec = build_thin_domain(equilateral(3), 0.1);
  const auto a = triangulate(spec, 0.05, 4);
  const auto b = triangulate(spec, 0.05, 4);
  CHECK(mesh_to_text(a) == mesh_to_text(b));
}

TEST_CASE("text importer rejects corrupt input") {
  CHECK_THROWS_AS(mesh_from_text(""), MeshError);
  CHECK_THROWS_AS(mesh_from_text("2\n0 0\n1 0\n"), MeshError);  // too few nodes for a tri
  CHECK_THROWS_AS(mesh_from_text("3\n0 0\n1 0\n0 1\n1\n0 1 7 0\n"), MeshError);  // bad index
}

TEST_CASE("mesh parameters are validated") {
  const auto spec = build_thin_domain(equilateral(3), 0.1);
  CHECK_THROWS_AS(triangulate(spec, 0.2, 4), MeshError);   // h > eps
  CHECK_THROWS_AS(triangulate(spec, 0.025, 1), MeshError);  // too few layers
  CHECK_THROWS_AS(triangulate(spec, -0.1, 4), MeshError);
}

TEST_CASE("validate_mesh flags broken meshes") {
  const auto spec = build_thin_domain(build_star({1, 1}, {0, M_PI}), 0.1);
  auto mesh = triangulate(spec, 0.05, 4);
  SUBCASE("flipped triangle") {
    std::swap(mesh.triangles[0][0], mesh.triangles[0][1]);
    CHECK_THROWS_AS(validate_mesh(mesh), MeshError);
  }
  SUBCASE("duplicated triangle breaks edge incidence") {
    mesh.triangles.push_back(mesh.triangles[0]);
    mesh.region.push_back(mesh.region[0]);
    CHECK_THROWS_AS(validate_mesh(mesh), MeshError);
  }
  SUBCASE("angle floor") {
    CHECK_THROWS_AS(validate_mesh(mesh, 50.0), MeshError);  // floor above actual 45
  }
}

TEST_CASE("property: junction coarse triangles tile the junction polygon") {
  for (double eps : {0.2, 0.1, 0.05}) {
    const auto spec = build_thin_domain(equilateral(3), eps);
    double sum = 0.0;
    for (const auto& tri : junction_coarse_triangles(spec))
      sum += 0.5 * cross2(tri[1] - tri[0], tri[2] - tri[0]);
    CHECK(sum == doctest::Approx(spec.junction_area()).epsilon(1e-12));
  }
}

}  // TEST_SUITE
