#include "t2g/fem2d.hpp"

#include <array>
#include <cmath>

namespace t2g {

namespace {

struct PotQuad {
  const ThinDomainSpec* spec;
  const PotentialSpec* V;
  double weight;

  // Midpoint-rule block of int V_eps lam_i lam_j over one (sub)triangle; the
  // rows `bary` give each corner's barycentric coordinates in the element.
  Eigen::Matrix3d block(const std::array<Vec2, 3>& x,
                        const std::array<Eigen::Vector3d, 3>& bary) const {
    const double area = 0.5 * cross2(x[1] - x[0], x[2] - x[0]);
    Eigen::Matrix3d out = Eigen::Matrix3d::Zero();
    for (int e = 0; e < 3; ++e) {
      const Vec2 m = 0.5 * (x[e] + x[(e + 1) % 3]);
      const Eigen::Vector3d lam = 0.5 * (bary[e] + bary[(e + 1) % 3]);
      const double v = scaled_potential(m, *spec, *V) * weight;
      out += v * lam * lam.transpose();
    }
    return (area / 3.0) * out;
  }

  Eigen::Matrix3d refine(const std::array<Vec2, 3>& x,
                         const std::array<Eigen::Vector3d, 3>& bary,
                         const Eigen::Matrix3d& coarse, double tol, int depth) const {
    const std::array<Vec2, 3> mid = {0.5 * (x[0] + x[1]), 0.5 * (x[1] + x[2]),
                                     0.5 * (x[2] + x[0])};
    const std::array<Eigen::Vector3d, 3> bmid = {0.5 * (bary[0] + bary[1]),
                                                 0.5 * (bary[1] + bary[2]),
                                                 0.5 * (bary[2] + bary[0])};
    const std::array<std::array<Vec2, 3>, 4> xs = {{{x[0], mid[0], mid[2]},
                                                    {mid[0], x[1], mid[1]},
                                                    {mid[2], mid[1], x[2]},
                                                    {mid[0], mid[1], mid[2]}}};
    const std::array<std::array<Eigen::Vector3d, 3>, 4> bs = {
        {{bary[0], bmid[0], bmid[2]},
         {bmid[0], bary[1], bmid[1]},
         {bmid[2], bmid[1], bary[2]},
         {bmid[0], bmid[1], bmid[2]}}};
    std::array<Eigen::Matrix3d, 4> kids;
    Eigen::Matrix3d fine = Eigen::Matrix3d::Zero();
    for (int c = 0; c < 4; ++c) {
      kids[c] = block(xs[c], bs[c]);
      fine += kids[c];
    }
    if (depth <= 0 || (fine - coarse).cwiseAbs().maxCoeff() <= tol) return fine;
    Eigen::Matrix3d out = Eigen::Matrix3d::Zero();
    for (int c = 0; c < 4; ++c) out += refine(xs[c], bs[c], kids[c], 0.25 * tol, depth - 1);
    return out;
  }
};

double dist_origin_triangle(const std::array<Vec2, 3>& x) {
  const Vec2 o(0, 0);
  bool inside = true;
  for (int i = 0; i < 3; ++i)
    if (cross2(x[(i + 1) % 3] - x[i], o - x[i]) < 0.0) inside = false;
  if (inside) return 0.0;
  double d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) d = std::min(d, dist_point_segment(o, x[i], x[(i + 1) % 3]));
  return d;
}

}  // namespace

AssembledForms assemble(const Mesh2D& mesh, const ThinDomainSpec& spec, const PotentialSpec* V) {
  const int n = mesh.node_count();
  const double w = spec.measure_weight;
  std::vector<Triplet> tK, tM, tP;
  tK.reserve(6 * mesh.tri_count());
  tM.reserve(6 * mesh.tri_count());

  const bool with_pot = V != nullptr && V->v0 != 0.0;
  const double support = with_pot ? spec.eps * V->rho : 0.0;
  const PotQuad quad{&spec, V, w};
  const std::array<Eigen::Vector3d, 3> unit_bary = {
      Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0), Eigen::Vector3d(0, 0, 1)};

  for (int t = 0; t < mesh.tri_count(); ++t) {
    const auto& tr = mesh.triangles[t];
    const std::array<Vec2, 3> x = {mesh.nodes[tr[0]], mesh.nodes[tr[1]], mesh.nodes[tr[2]]};
    const double area = 0.5 * cross2(x[1] - x[0], x[2] - x[0]);
    if (!(area > 0.0)) throw MeshError("assembly hit a degenerate triangle");

    Vec2 g[3];
    for (int i = 0; i < 3; ++i) {
      const Vec2 e = x[(i + 2) % 3] - x[(i + 1) % 3];
      g[i] = Vec2(-e.y(), e.x()) / (2.0 * area);
    }
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        tK.push_back({tr[i], tr[j], area * w * g[i].dot(g[j])});
        tM.push_back({tr[i], tr[j], area * w / 12.0 * (i == j ? 2.0 : 1.0)});
      }

    if (with_pot && dist_origin_triangle(x) <= support) {
      const Eigen::Matrix3d coarse = quad.block(x, unit_bary);
      const Eigen::Matrix3d B = quad.refine(x, unit_bary, coarse, 1e-10, 12);
      for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j)
          if (B(i, j) != 0.0) tP.push_back({tr[i], tr[j], B(i, j)});
    }
  }

  AssembledForms out;
  out.K = SparseSymMatrix::from_triplets(n, tK);
  out.M = SparseSymMatrix::from_triplets(n, tM);
  out.P = SparseSymMatrix::from_triplets(n, tP);
  return out;
}

FormParts form_values(const DiscreteField& u, const AssembledForms& forms) {
  FormParts p;
  p.kinetic = forms.K.quadratic_form(u);
  p.potential = forms.P.quadratic_form(u);
  p.norm2 = forms.M.quadratic_form(u);
  return p;
}

}  // namespace t2g
