#pragma once

// Thin planar star domain around a metric star graph: per edge j a tube
//   D_j = R_j { (y1, y2) : eps*l <= y1 < l_j, |y2| < eps },
// glued to a junction polygon J_eps = (eps/eps0) * J, where J is stored at
// the reference scale eps0. The domain carries the normalized measure
// d mu_eps = dx / (2 eps), under which each tube has measure l_j - eps*l and
// the junction measure vanishes like eps.
//
// The squeezed potential is V_eps(x) = (1/eps) V(x/eps) with supp V inside
// the rescaled junction (1/eps0) J; its coupling constant is
// coupling = (1/2) int V, the delta strength appearing in the limit form.

#include <functional>
#include <optional>
#include <vector>

#include "t2g/geometry.hpp"
#include "t2g/star_graph.hpp"

namespace t2g {

inline constexpr double kMeasureOmega = 2.0;  // length of the 1-D unit ball

struct ThinDomainSpec {
  MetricStarGraph graph;
  double eps = 0.1;
  double eps0 = 0.25;
  double l = 1.0;  // tube mouths sit at distance eps*l from O (config key domain.l)
  double a = 2.0;  // junction diagnostics extend to eps*a, l < a < min_j l_j / eps0
  std::vector<Vec2> junction;  // polygon J at reference scale eps0, CCW
  double measure_weight = 0.0;  // 1 / (2 eps)

  double junction_area_ref() const;   // |J|
  double junction_area() const;       // |J_eps| = (eps/eps0)^2 |J|
  double tube_area(int j) const;      // (l_j - eps*l) * 2 eps
  std::vector<Vec2> junction_scaled() const;  // J_eps vertices
  double mouth_position() const { return eps * l; }
};

// junction == nullopt builds the AUTO junction: the tube-mouth segments
// joined by straight chords in angular order (for N = 1, a symmetric box).
// Validates mouth/polygon interface matching, tube disjointness, O strictly
// inside, and that a valid diagnostics constant a exists. a_param <= 0 picks
// the default min(2l, midpoint of the admissible interval).
ThinDomainSpec build_thin_domain(const MetricStarGraph& G, double eps, double eps0 = 0.25,
                                 double l = 1.0,
                                 const std::optional<std::vector<Vec2>>& junction = std::nullopt,
                                 double a_param = 0.0);

struct GraphPoint {
  int edge = 0;
  double s = 0.0;  // s == 0 means the junction vertex O
  bool at_origin() const { return s == 0.0; }
};

// The projection f_eps: tube points map to (j, y1); junction points map to
// the nearest point of the star segments { R_j (t,0) : 0 <= t <= eps*l },
// ties resolved toward the smallest edge index. Points farther than 1e-12
// from the closed domain throw DomainError.
GraphPoint project_to_graph(const Vec2& x, const ThinDomainSpec& spec);

// Nearest-segment rule alone (no membership test); used by quadrature over
// the junction where boundary rounding must not throw.
GraphPoint project_in_junction(const Vec2& x, const ThinDomainSpec& spec);

enum class PotentialProfile { CosineBump, Box };

struct PotentialSpec {
  PotentialProfile profile = PotentialProfile::CosineBump;
  double rho = 0.8;  // support radius of V at the reference (z) scale
  double v0 = 0.0;   // amplitude

  // V(z): cosine bump v0 cos^2(pi |z| / (2 rho)) for |z| <= rho, or the flat
  // box v0 * [|z| <= rho] (comparison flag; discontinuous).
  double operator()(const Vec2& z) const;
};

double scaled_potential(const Vec2& x, const ThinDomainSpec& spec, const PotentialSpec& V);

// coupling = (1/2) int_R2 V. Adaptive 2-D quadrature to relative 1e-10 for
// the cosine profile and for generic integrands; the discontinuous box
// profile is integrated in closed form.
double coupling_constant(const PotentialSpec& V);
double coupling_constant(const std::function<double(const Vec2&)>& V, double support_radius);

// Amplitude v0 such that the profile reaches the target coupling (bisection
// against the quadrature; target 0 returns 0).
double solve_amplitude(PotentialProfile profile, double rho, double target_coupling);

// Checks that the support ball of radius rho fits inside (1/eps0) J.
void validate_potential_support(const PotentialSpec& V, const ThinDomainSpec& spec);

// mu_eps(Omega_eps) = |J_eps|/(2 eps) + sum_j (l_j - eps*l); converges to the
// total graph length as eps -> 0.
double measure_total(const ThinDomainSpec& spec);

// Gromov-Hausdorff-style measure check: |int psi(f_eps) d mu_eps - int_G psi|
// for a continuous test function psi(j, s), by exact tube integrals plus
// adaptive quadrature over the junction.
double gh_measure_error(const ThinDomainSpec& spec,
                        const std::function<double(int, double)>& psi);

}  // namespace t2g
