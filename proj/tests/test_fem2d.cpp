#include <cmath>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "t2g/fem2d.hpp"

using namespace t2g;

namespace {

struct Setup {
  ThinDomainSpec spec;
  Mesh2D mesh;
  AssembledForms forms;
};

Setup interval_setup(double eps, double h, const PotentialSpec* V = nullptr) {
  Setup s;
  s.spec = build_thin_domain(build_star({1, 1}, {0, M_PI}), eps);
  s.mesh = triangulate(s.spec, h, std::max(2, static_cast<int>(std::lround(2 * eps / h))));
  s.forms = assemble(s.mesh, s.spec, V);
  return s;
}

}  // namespace

TEST_SUITE("fem2d") {

TEST_CASE("stiffness annihilates constants and is PSD") {
  const auto s = interval_setup(0.2, 0.05);
  const int n = s.mesh.node_count();
  const DiscreteField one = DiscreteField::Ones(n);
  CHECK((s.forms.K.multiply(one)).lpNorm<Eigen::Infinity>() <= 1e-12);
  for (int trial = 0; trial < 5; ++trial) {
    DiscreteField u(n);
    for (int i = 0; i < n; ++i) u[i] = t2g_test::uniform(-1, 1);
    CHECK(s.forms.K.quadratic_form(u) >= -1e-10);
  }
}

TEST_CASE("mass of the constant equals the normalized domain measure") {
  const auto s = interval_setup(0.2, 0.05);
  const DiscreteField one = DiscreteField::Ones(s.mesh.node_count());
  CHECK(s.forms.M.quadratic_form(one) ==
        doctest::Approx(measure_total(s.spec)).epsilon(1e-12));
}

TEST_CASE("affine fields carry exact kinetic energy") {
  // u = a + b x + c y has |grad u|^2 = b^2 + c^2, so the weighted Dirichlet
  // integral is (b^2 + c^2) * mu(Omega) exactly (P1 reproduces affine fields).
  const auto s = interval_setup(0.2, 0.05);
  const double b = 0.7, c = -1.3;
  DiscreteField u(s.mesh.node_count());
  for (int i = 0; i < s.mesh.node_count(); ++i)
    u[i] = 0.4 + b * s.mesh.nodes[i].x() + c * s.mesh.nodes[i].y();
  const auto parts = form_values(u, s.forms);
  CHECK(parts.kinetic ==
        doctest::Approx((b * b + c * c) * measure_total(s.spec)).epsilon(1e-12));
  CHECK(parts.potential == 0.0);
}

TEST_CASE("two opposite tubes form a rectangle: Neumann interval spectrum") {
  // The 2-edge thin domain is exactly [-1,1] x [-eps, eps]; transversal modes
  // sit above pi^2/(2 eps)^2, so the low spectrum is the 1-D Neumann chain.
  const auto s = interval_setup(0.2, 0.05);
  const auto res = solve_gevp(sparse_sum(s.forms.K, s.forms.P), s.forms.M, 4, 1e-9);
  for (int m = 0; m < 4; ++m) {
    const double exact = std::pow(m * M_PI / 2.0, 2);
    CHECK(std::abs(res.eigenvalues[m] - exact) <= 1e-2 * std::max(1.0, exact));
  }
}

TEST_CASE("potential matrix reproduces the coupling constant on constants") {
  // 1' P 1 = int V_eps d mu = (1/(2 eps^2)) int V(x/eps) dx = (1/2) int V = C_V,
  // independently of eps.
  PotentialSpec V;
  V.rho = 0.8;
  V.v0 = solve_amplitude(PotentialProfile::CosineBump, 0.8, 1.0);
  const auto G = build_star({1, 1, 1}, {0, 2 * M_PI / 3, 4 * M_PI / 3});
  for (double eps : {0.2, 0.1}) {
    const auto spec = build_thin_domain(G, eps);
    const auto mesh = triangulate(spec, eps / 4, 8);
    const auto forms = assemble(mesh, spec, &V);
    const DiscreteField one = DiscreteField::Ones(mesh.node_count());
    CHECK(forms.P.quadratic_form(one) == doctest::Approx(1.0).epsilon(2e-6));
  }
}

TEST_CASE("no potential: P assembles to exact zeros") {
  const auto s = interval_setup(0.2, 0.05);
  CHECK(s.forms.P.n == s.mesh.node_count());
  const DiscreteField one = DiscreteField::Ones(s.mesh.node_count());
  CHECK(s.forms.P.quadratic_form(one) == 0.0);
  DiscreteField u(s.mesh.node_count());
  for (int i = 0; i < s.mesh.node_count(); ++i) u[i] = t2g_test::uniform(-1, 1);
  CHECK(s.forms.P.quadratic_form(u) == 0.0);
}

TEST_CASE("form_values splits the generalized Rayleigh quotient") {
  PotentialSpec V;
  V.rho = 0.8;
  V.v0 = 1.0;
  const auto G = build_star({1, 1, 1}, {0, 2 * M_PI / 3, 4 * M_PI / 3});
  const auto spec = build_thin_domain(G, 0.2);
  const auto mesh = triangulate(spec, 0.05, 8);
  const auto forms = assemble(mesh, spec, &V);
  DiscreteField u(mesh.node_count());
  for (int i = 0; i < mesh.node_count(); ++i)
    u[i] = std::sin(3.0 * mesh.nodes[i].x()) + 0.5 * mesh.nodes[i].y();
  const auto parts = form_values(u, forms);
  CHECK(parts.kinetic == doctest::Approx(forms.K.quadratic_form(u)).epsilon(1e-14));
  CHECK(parts.potential == doctest::Approx(forms.P.quadratic_form(u)).epsilon(1e-14));
  CHECK(parts.norm2 == doctest::Approx(forms.M.quadratic_form(u)).epsilon(1e-14));
  CHECK(parts.norm2 > 0.0);
  CHECK(parts.potential > 0.0);
}

TEST_CASE("mass matrix row sums integrate the hat functions") {
  // sum_j M_ij = int phi_i d mu > 0, and the total recovers the measure.
  const auto s = interval_setup(0.2, 0.05);
  const int n = s.mesh.node_count();
  const DiscreteField one = DiscreteField::Ones(n);
  const DiscreteField rows = s.forms.M.multiply(one);
  CHECK(rows.minCoeff() > 0.0);
  CHECK(rows.sum() == doctest::Approx(measure_total(s.spec)).epsilon(1e-12));
}

}  // TEST_SUITE
