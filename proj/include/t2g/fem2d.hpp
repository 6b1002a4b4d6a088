#pragma once

// P1 finite elements on thin-domain meshes under the normalized measure
// d mu_eps = dx / (2 eps): stiffness K, squeezed-potential matrix P and mass
// matrix M, all carrying the measure weight, plus the quadratic-form
// evaluation and the generalized eigensolver (gevp.hpp).

#include "t2g/gevp.hpp"
#include "t2g/mesh2d.hpp"
#include "t2g/thin_domain.hpp"

namespace t2g {

// Nodal values over a Mesh2D; length equals the node count.
using DiscreteField = Eigen::VectorXd;

struct AssembledForms {
  SparseSymMatrix K;  // int grad u . grad v d mu_eps
  SparseSymMatrix P;  // int V_eps u v d mu_eps
  SparseSymMatrix M;  // int u v d mu_eps
};

// V == nullptr assembles P as the zero matrix. Elements meeting supp V_eps
// are integrated by the 3-point midpoint rule under recursive 4-way
// subdivision until the element integral stabilizes.
AssembledForms assemble(const Mesh2D& mesh, const ThinDomainSpec& spec,
                        const PotentialSpec* V = nullptr);

struct FormParts {
  double kinetic = 0.0;    // u' K u
  double potential = 0.0;  // u' P u
  double norm2 = 0.0;      // u' M u
};

FormParts form_values(const DiscreteField& u, const AssembledForms& forms);

}  // namespace t2g
