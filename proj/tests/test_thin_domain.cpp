#include <cmath>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "t2g/errors.hpp"
#include "t2g/thin_domain.hpp"

using namespace t2g;

namespace {

MetricStarGraph equilateral(int n, double l = 1.0) {
  std::vector<double> lengths(n, l), angles;
  for (int j = 0; j < n; ++j) angles.push_back(2 * M_PI * j / n);
  return build_star(lengths, angles);
}

MetricStarGraph interval_star() { return build_star({1, 1}, {0, M_PI}); }

}  // namespace

TEST_SUITE("thin_domain") {

TEST_CASE("single edge: AUTO junction is the symmetric box") {
  const auto G = build_star({1.0}, {0.0});
  const auto spec = build_thin_domain(G, 0.1);
  // box spans y1 in [-eps0*l, eps0*l], y2 in [-eps0, eps0] at reference scale
  CHECK(spec.junction_area_ref() == doctest::Approx(4 * 0.25 * 0.25 * 1.0).epsilon(1e-14));
  CHECK(spec.junction_area() ==
        doctest::Approx(std::pow(0.1 / 0.25, 2) * 0.25).epsilon(1e-13));
}

TEST_CASE("two opposite edges: AUTO junction is a rectangle, measure exact") {
  const auto spec = build_thin_domain(interval_star(), 0.1);
  CHECK(spec.junction_area_ref() == doctest::Approx(0.25).epsilon(1e-14));
  // |J_eps|/(2 eps) + 2 (1 - eps l) telescopes to the total edge length
  CHECK(measure_total(spec) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(spec.tube_area(0) == doctest::Approx((1.0 - 0.1) * 0.2).epsilon(1e-14));
  CHECK(spec.measure_weight == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(spec.mouth_position() == doctest::Approx(0.1).epsilon(1e-16));
}

TEST_CASE("narrow angular gaps are rejected") {
  // two edges 0.3 rad apart cannot host two width-2eps0 tubes side by side
  const auto G = build_star({1, 1, 1}, {0.0, 0.3, 3.0});
  CHECK_THROWS_AS(build_thin_domain(G, 0.05), GeometryError);
}

TEST_CASE("scale ordering eps <= eps0 is enforced") {
  CHECK_THROWS_AS(build_thin_domain(interval_star(), 0.3, 0.25), DomainError);
  CHECK_THROWS_AS(build_thin_domain(interval_star(), -0.1), DomainError);
}

TEST_CASE("diagnostics radius defaults to twice the mouth distance") {
  const auto spec = build_thin_domain(equilateral(3), 0.1);
  CHECK(spec.a == doctest::Approx(2.0).epsilon(1e-13));
  // explicit choice must stay inside (l, min_l / eps0)
  const auto wide = build_thin_domain(equilateral(3), 0.1, 0.25, 1.0, std::nullopt, 3.0);
  CHECK(wide.a == doctest::Approx(3.0));
  CHECK_THROWS_AS(build_thin_domain(equilateral(3), 0.1, 0.25, 1.0, std::nullopt, 0.5),
                  DomainError);
  CHECK_THROWS_AS(build_thin_domain(equilateral(3), 0.1, 0.25, 1.0, std::nullopt, 5.0),
                  DomainError);
}

TEST_CASE("custom junction polygons are validated against the tube mouths") {
  const auto G = interval_star();
  // a valid junction: the AUTO rectangle passed back in explicitly
  const auto auto_spec = build_thin_domain(G, 0.1);
  const auto again = build_thin_domain(G, 0.1, 0.25, 1.0, auto_spec.junction);
  CHECK(again.junction_area_ref() == doctest::Approx(auto_spec.junction_area_ref()));
  // a polygon that misses the mouths entirely
  const std::vector<Vec2> off{{10, 10}, {11, 10}, {11, 11}, {10, 11}};
  CHECK_THROWS_AS(build_thin_domain(G, 0.1, 0.25, 1.0, off), GeometryError);
  // origin outside the polygon
  const std::vector<Vec2> shifted{{0.1, -0.25}, {0.25, -0.25}, {0.25, 0.25}, {0.1, 0.25}};
  CHECK_THROWS_AS(build_thin_domain(G, 0.1, 0.25, 1.0, shifted), GeometryError);
}

TEST_CASE("tube points project to their own coordinate") {
  const auto spec = build_thin_domain(equilateral(3), 0.1);
  const Eigen::Matrix2d R = spec.graph.rotations[1];
  const Vec2 x = R * Vec2(0.6, 0.05);
  const auto p = project_to_graph(x, spec);
  CHECK(p.edge == 1);
  CHECK(p.s == doctest::Approx(0.6).epsilon(1e-14));
  CHECK_FALSE(p.at_origin());
}

TEST_CASE("junction points snap to the nearest stub, ties to the lowest edge") {
  const auto spec = build_thin_domain(equilateral(3), 0.1);
  const auto at_o = project_to_graph({0, 0}, spec);
  CHECK(at_o.edge == 0);
  CHECK(at_o.at_origin());
  // slightly along edge 2's direction inside the junction
  const Vec2 x = spec.graph.rotations[2] * Vec2(0.05, 0.0);
  const auto p = project_to_graph(x, spec);
  CHECK(p.edge == 2);
  CHECK(p.s == doctest::Approx(0.05).epsilon(1e-12));
  CHECK_THROWS_AS(project_to_graph({50, 50}, spec), DomainError);
}

TEST_CASE("cosine profile coupling matches the closed form") {
  PotentialSpec V;
  V.profile = PotentialProfile::CosineBump;
  V.rho = 0.8;
  V.v0 = 1.0;
  // (1/2) int v0 cos^2(pi r / (2 rho)) = v0 rho^2 (pi/4 - 1/pi)
  const double closed = 0.8 * 0.8 * (M_PI / 4.0 - 1.0 / M_PI);
  CHECK(coupling_constant(V) == doctest::Approx(closed).epsilon(1e-10));
  CHECK(coupling_constant(V) == doctest::Approx(0.2989364974167409).epsilon(1e-12));
}

TEST_CASE("box profile coupling: closed form versus generic quadrature") {
  PotentialSpec V;
  V.profile = PotentialProfile::Box;
  V.rho = 0.6;
  V.v0 = 2.5;
  const double closed = 0.5 * 2.5 * M_PI * 0.6 * 0.6;
  CHECK(coupling_constant(V) == doctest::Approx(closed).epsilon(1e-14));
  // generic-callable route on the smooth cosine profile agrees with the spec route
  PotentialSpec C;
  C.rho = 0.8;
  C.v0 = 1.3;
  const double generic =
      coupling_constant([&](const Vec2& z) { return C(z); }, C.rho);
  CHECK(generic == doctest::Approx(coupling_constant(C)).epsilon(1e-9));
}

TEST_CASE("amplitude solve inverts the coupling map") {
  const double v0 = solve_amplitude(PotentialProfile::CosineBump, 0.8, 1.0);
  CHECK(v0 == doctest::Approx(3.345192068019455).epsilon(1e-10));
  PotentialSpec V;
  V.rho = 0.8;
  V.v0 = v0;
  CHECK(coupling_constant(V) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(solve_amplitude(PotentialProfile::Box, 0.5, 0.0) == 0.0);
}

TEST_CASE("potential support must fit inside the rescaled junction") {
  const auto spec = build_thin_domain(equilateral(3), 0.1);
  PotentialSpec V;
  V.rho = 0.8;
  V.v0 = 1.0;
  CHECK_NOTHROW(validate_potential_support(V, spec));
  V.rho = 1.01;  // inradius of the rescaled 3-star junction is 1
  CHECK_THROWS_AS(validate_potential_support(V, spec), DomainError);
}

TEST_CASE("scaled potential concentrates as 1/eps at the junction scale") {
  const auto spec = build_thin_domain(equilateral(3), 0.05);
  PotentialSpec V;
  V.rho = 0.8;
  V.v0 = 2.0;
  CHECK(scaled_potential({0, 0}, spec, V) == doctest::Approx(2.0 / 0.05).epsilon(1e-13));
  // outside the support ball of radius eps*rho
  const Vec2 far = spec.graph.rotations[0] * Vec2(0.05, 0.0);
  CHECK(scaled_potential(far, spec, V) == 0.0);
}

TEST_CASE("measure error of the constant equals the measure defect") {
  const auto spec = build_thin_domain(equilateral(3), 0.1);
  const double direct = std::abs(measure_total(spec) - spec.graph.total_length());
  const double via_gh = gh_measure_error(spec, [](int, double) { return 1.0; });
  CHECK(via_gh == doctest::Approx(direct).epsilon(1e-10));
  CHECK(direct > 0.0);  // junction over-counts at finite eps
}

TEST_CASE("gh measure error decays roughly linearly in eps") {
  std::vector<double> eps{0.2, 0.1, 0.05};
  std::vector<double> err;
  for (double e : eps) {
    const auto spec = build_thin_domain(equilateral(3), e);
    err.push_back(gh_measure_error(
        spec, [](int j, double s) { return std::cos(M_PI * s) + 0.3 * j; }));
  }
  CHECK(err[1] < err[0]);
  CHECK(err[2] < err[1]);
}

TEST_CASE("property: random admissible stars build coherent domains") {
  for (int trial = 0; trial < 10; ++trial) {
    const int n = t2g_test::uniform_int(1, 3);
    std::vector<double> lengths, angles;
    for (int j = 0; j < n; ++j) {
      lengths.push_back(t2g_test::uniform(1.0, 2.0));
      angles.push_back(2 * M_PI * j / n + t2g_test::uniform(-0.1, 0.1));
    }
    const auto G = build_star(lengths, angles);
    const double eps = t2g_test::uniform(0.02, 0.2);
    const auto spec = build_thin_domain(G, eps);
    // measure identity: junction contribution + tubes
    double expect = spec.junction_area() / (2 * eps);
    for (int j = 0; j < n; ++j) expect += lengths[j] - eps * spec.l;
    CHECK(measure_total(spec) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(spec.junction_area() > 0.0);
    // projecting every tube mouth center recovers the mouth coordinate
    for (int j = 0; j < n; ++j) {
      const Vec2 mouth = spec.graph.rotations[j] * Vec2(spec.mouth_position(), 0.0);
      const auto p = project_to_graph(mouth, spec);
      CHECK(p.edge == j);
      CHECK(p.s == doctest::Approx(spec.mouth_position()).epsilon(1e-10));
    }
  }
}

}  // TEST_SUITE
